#include "kst/piecewise.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace kst {

PiecewisePoly::PiecewisePoly(std::string var, std::vector<Rational> breaks, std::vector<Poly> pieces,
                             bool continuous)
    : var_(std::move(var)), breaks_(std::move(breaks)), pieces_(std::move(pieces)), continuous_(continuous) {
    if (breaks_.size() != pieces_.size() + 1 || pieces_.empty())
        throw std::invalid_argument("piecewise: need k+1 breakpoints for k pieces");
    for (std::size_t i = 1; i < breaks_.size(); ++i)
        if (!(breaks_[i - 1] < breaks_[i])) throw std::invalid_argument("piecewise: breakpoints not increasing");
    if (continuous_) {
        for (std::size_t i = 1; i < pieces_.size(); ++i) {
            VarValues at{{var_, breaks_[i]}};
            if (pieces_[i - 1].eval_partial(at) != pieces_[i].eval_partial(at))
                throw std::invalid_argument("piecewise: discontinuous at " + var_ + " = " + breaks_[i].str());
        }
    }
}

std::size_t PiecewisePoly::piece_at(const Rational& x) const {
    if (x < lo() || x > hi())
        throw std::out_of_range("piecewise: " + x.str() + " outside [" + lo().str() + ", " + hi().str() + "]");
    for (std::size_t i = 0; i < pieces_.size(); ++i)
        if (x <= breaks_[i + 1]) return i;
    return pieces_.size() - 1;
}

Poly PiecewisePoly::at(const Rational& x) const {
    return pieces_[piece_at(x)].eval_partial({{var_, x}}).trimmed();
}

Poly PiecewisePoly::integrate(const Rational& a, const Rational& b) const {
    if (a > b) return -integrate(b, a);
    if (a < lo() || b > hi())
        throw std::out_of_range("piecewise: integration window [" + a.str() + ", " + b.str() + "] outside domain");
    Poly sum(0);
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        Rational l = max(a, breaks_[i]), r = min(b, breaks_[i + 1]);
        if (l < r) sum += pieces_[i].integrate(var_, Poly(l), Poly(r));
    }
    return sum.trimmed();
}

Rational PiecewisePoly::integrate_value(const Rational& a, const Rational& b) const {
    return integrate(a, b).constant_value();
}

std::vector<Rational> PiecewisePoly::merged_breaks(const PiecewisePoly& a, const PiecewisePoly& b) {
    if (a.lo() != b.lo() || a.hi() != b.hi()) throw std::invalid_argument("piecewise: window mismatch");
    std::vector<Rational> out = a.breaks_;
    out.insert(out.end(), b.breaks_.begin(), b.breaks_.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string PiecewisePoly::str() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        if (i) os << "; ";
        os << "[" << breaks_[i] << ", " << breaks_[i + 1] << "]: " << pieces_[i];
    }
    return os.str();
}

}  // namespace kst
