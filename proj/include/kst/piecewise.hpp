#pragma once

#include "kst/poly.hpp"

#include <string>
#include <vector>

namespace kst {

// Piecewise polynomial in one variable on closed intervals
// [b0,b1], [b1,b2], ... Pieces may carry extra symbolic parameters.
class PiecewisePoly {
public:
    PiecewisePoly() = default;
    PiecewisePoly(std::string var, std::vector<Rational> breaks, std::vector<Poly> pieces,
                  bool continuous = false);

    const std::string& var() const { return var_; }
    const std::vector<Rational>& breaks() const { return breaks_; }
    const std::vector<Poly>& pieces() const { return pieces_; }
    bool continuous() const { return continuous_; }
    const Rational& lo() const { return breaks_.front(); }
    const Rational& hi() const { return breaks_.back(); }
    bool empty() const { return pieces_.empty(); }

    // Index of the piece containing x (the left one at an interior breakpoint).
    std::size_t piece_at(const Rational& x) const;
    Poly at(const Rational& x) const;

    // Exact integral over [a, b]; symbolic parameters survive.
    Poly integrate(const Rational& a, const Rational& b) const;
    Poly integrate() const { return integrate(lo(), hi()); }
    // Same, for pieces without extra parameters.
    Rational integrate_value(const Rational& a, const Rational& b) const;

    // Maps every piece through f(piece, index).
    template <class F>
    PiecewisePoly map(F f, bool continuous = false) const {
        std::vector<Poly> ps;
        for (std::size_t i = 0; i < pieces_.size(); ++i) ps.push_back(f(pieces_[i], i));
        return PiecewisePoly(var_, breaks_, std::move(ps), continuous);
    }

    // Common refinement of the breakpoints of two functions on the same window.
    static std::vector<Rational> merged_breaks(const PiecewisePoly& a, const PiecewisePoly& b);

    std::string str() const;

private:
    std::string var_;
    std::vector<Rational> breaks_;
    std::vector<Poly> pieces_;
    bool continuous_ = false;
};

}  // namespace kst
