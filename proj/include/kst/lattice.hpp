#pragma once

#include "kst/matrix.hpp"
#include "kst/poly.hpp"

#include <array>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace kst {

using Basis = std::vector<std::string>;

// A divisor (or curve) class whose coefficients are polynomials in parameters.
class DivisorPath {
public:
    DivisorPath() = default;
    explicit DivisorPath(Basis basis);
    DivisorPath(Basis basis, std::vector<Poly> coeffs);

    static DivisorPath basis_element(const Basis& basis, const std::string& name);

    const Basis& basis() const { return basis_; }
    const std::vector<Poly>& coeffs() const { return coeffs_; }
    const Poly& coeff(std::size_t i) const { return coeffs_[i]; }
    const Poly& coeff(const std::string& name) const;
    std::size_t size() const { return basis_.size(); }
    bool is_zero() const;

    DivisorPath operator-() const;
    DivisorPath& operator+=(const DivisorPath& o);
    DivisorPath& operator-=(const DivisorPath& o);
    friend DivisorPath operator+(DivisorPath a, const DivisorPath& b) { return a += b; }
    friend DivisorPath operator-(DivisorPath a, const DivisorPath& b) { return a -= b; }
    DivisorPath scaled(const Poly& c) const;
    friend bool operator==(const DivisorPath& a, const DivisorPath& b);
    friend bool operator!=(const DivisorPath& a, const DivisorPath& b) { return !(a == b); }

    DivisorPath eval_partial(const VarValues& at) const;
    DivisorPath substitute(const std::map<std::string, Poly>& map) const;
    // Rational coefficients; throws if any coefficient is not constant.
    std::vector<Rational> constant_coeffs() const;

    std::string str() const;

private:
    void check_basis(const DivisorPath& o) const;

    Basis basis_;
    std::vector<Poly> coeffs_;
};

// Parses a linear expression in basis names with polynomial coefficients,
// e.g. "3H - E1 - E2 - u*F" or "(u-1) S1hat". Names in `named` expand to
// their classes first.
DivisorPath parse_divisor(const std::string& text, const Basis& basis,
                          const std::map<std::string, DivisorPath>& named = {});

class ThreefoldLattice {
public:
    ThreefoldLattice() = default;
    explicit ThreefoldLattice(Basis basis);

    const Basis& basis() const { return basis_; }
    std::size_t index(const std::string& name) const;

    // Records D_a·D_b·D_c (any order).
    void set(const std::string& a, const std::string& b, const std::string& c, const Rational& value);
    // Declares D_a·D_b = 0 as a curve class: every triple containing both vanishes.
    void zero_pair(const std::string& a, const std::string& b);

    Rational triple(std::size_t i, std::size_t j, std::size_t k) const;
    Poly triple_eval(const DivisorPath& a, const DivisorPath& b, const DivisorPath& c) const;
    Poly cube(const DivisorPath& d) const { return triple_eval(d, d, d); }

private:
    using Key = std::array<std::size_t, 3>;
    static Key key(std::size_t i, std::size_t j, std::size_t k);
    bool killed(const Key& k) const;
    void check(const DivisorPath& d) const;

    Basis basis_;
    std::map<Key, Rational> table_;
    std::set<std::pair<std::size_t, std::size_t>> zero_pairs_;
};

class SurfaceLattice {
public:
    SurfaceLattice() = default;
    SurfaceLattice(Basis basis, RatMatrix gram);

    const Basis& basis() const { return basis_; }
    const RatMatrix& gram() const { return gram_; }
    std::size_t index(const std::string& name) const;
    const Rational& pair(std::size_t i, std::size_t j) const { return gram_(i, j); }

    Poly pair_eval(const DivisorPath& a, const DivisorPath& b) const;
    Poly square(const DivisorPath& d) const { return pair_eval(d, d); }
    // D·(basis element i)
    Poly pair_with(const DivisorPath& d, std::size_t i) const;

private:
    void check(const DivisorPath& d) const;

    Basis basis_;
    RatMatrix gram_;
};

// Curve class known only through its intersection numbers with basis divisors.
struct CurveFunctional {
    std::string name;
    Basis basis;
    std::vector<Rational> pairing;

    Poly pair(const DivisorPath& d) const;
};

// Linear map sending each source basis class to a combination of target classes.
class Restriction {
public:
    Restriction() = default;
    Restriction(Basis from, Basis to, RatMatrix images);  // images: |from| x |to|

    const Basis& from() const { return from_; }
    const Basis& to() const { return to_; }
    const RatMatrix& images() const { return images_; }

    DivisorPath apply(const DivisorPath& d) const;

private:
    Basis from_, to_;
    RatMatrix images_;
};

}  // namespace kst
