#include "kst/lattice.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace kst {

namespace {

std::size_t find_name(const Basis& b, const std::string& name) {
    auto it = std::find(b.begin(), b.end(), name);
    if (it == b.end()) throw std::invalid_argument("unknown class '" + name + "'");
    return static_cast<std::size_t>(it - b.begin());
}

}  // namespace

DivisorPath::DivisorPath(Basis basis) : basis_(std::move(basis)), coeffs_(basis_.size(), Poly(0)) {}

DivisorPath::DivisorPath(Basis basis, std::vector<Poly> coeffs) : basis_(std::move(basis)), coeffs_(std::move(coeffs)) {
    if (basis_.size() != coeffs_.size()) throw std::invalid_argument("divisor: coefficient count mismatch");
}

DivisorPath DivisorPath::basis_element(const Basis& basis, const std::string& name) {
    DivisorPath d(basis);
    d.coeffs_[find_name(basis, name)] = Poly(1);
    return d;
}

const Poly& DivisorPath::coeff(const std::string& name) const { return coeffs_[find_name(basis_, name)]; }

bool DivisorPath::is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Poly& p) { return p.is_zero(); });
}

void DivisorPath::check_basis(const DivisorPath& o) const {
    if (basis_ != o.basis_) throw std::invalid_argument("divisor: mismatched lattice");
}

DivisorPath DivisorPath::operator-() const {
    DivisorPath r = *this;
    for (auto& c : r.coeffs_) c = -c;
    return r;
}

DivisorPath& DivisorPath::operator+=(const DivisorPath& o) {
    check_basis(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
}

DivisorPath& DivisorPath::operator-=(const DivisorPath& o) {
    check_basis(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
}

DivisorPath DivisorPath::scaled(const Poly& c) const {
    DivisorPath r = *this;
    for (auto& x : r.coeffs_) x *= c;
    return r;
}

bool operator==(const DivisorPath& a, const DivisorPath& b) {
    if (a.basis_ != b.basis_) return false;
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
        if (a.coeffs_[i] != b.coeffs_[i]) return false;
    return true;
}

DivisorPath DivisorPath::eval_partial(const VarValues& at) const {
    DivisorPath r = *this;
    for (auto& c : r.coeffs_) c = c.eval_partial(at).trimmed();
    return r;
}

DivisorPath DivisorPath::substitute(const std::map<std::string, Poly>& map) const {
    DivisorPath r = *this;
    for (auto& c : r.coeffs_) c = c.substitute(map, false).trimmed();
    return r;
}

std::vector<Rational> DivisorPath::constant_coeffs() const {
    std::vector<Rational> out;
    for (const auto& c : coeffs_) out.push_back(c.constant_value());
    return out;
}

std::string DivisorPath::str() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        const Poly& c = coeffs_[i];
        if (c.is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        if (c == Poly(1)) os << basis_[i];
        else if (c.is_constant()) os << c.constant_value() << "*" << basis_[i];
        else os << "(" << c << ")*" << basis_[i];
    }
    return first ? "0" : os.str();
}

DivisorPath parse_divisor(const std::string& text, const Basis& basis,
                          const std::map<std::string, DivisorPath>& named) {
    Poly p = parse_poly(text);
    if (!named.empty()) {
        std::map<std::string, Poly> sub;
        for (const auto& [name, d] : named) {
            if (!p.uses(name)) continue;
            if (d.basis() != basis) throw std::invalid_argument("named class '" + name + "' on another lattice");
            Poly e(0);
            for (std::size_t i = 0; i < basis.size(); ++i) e += d.coeff(i) * Poly::var(basis[i]);
            sub.emplace(name, e);
        }
        if (!sub.empty()) p = p.substitute(sub, false);
    }
    std::vector<int> idx(p.vars().size(), -1);
    for (std::size_t i = 0; i < p.vars().size(); ++i) {
        auto it = std::find(basis.begin(), basis.end(), p.vars()[i]);
        if (it != basis.end()) idx[i] = static_cast<int>(it - basis.begin());
    }
    std::vector<std::string> params;
    for (std::size_t i = 0; i < p.vars().size(); ++i)
        if (idx[i] < 0) params.push_back(p.vars()[i]);
    DivisorPath d(basis);
    std::vector<Poly> cs(basis.size(), Poly(params));
    for (const auto& [e, c] : p.terms()) {
        int which = -1, deg = 0;
        Mono rest;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (idx[i] >= 0) {
                deg += e[i];
                if (e[i] != 0) which = idx[i];
            } else {
                rest.push_back(e[i]);
            }
        }
        if (deg != 1 || which < 0)
            throw std::invalid_argument("divisor expression not linear in classes: '" + text + "'");
        cs[which] += Poly::monomial(params, rest, c);
    }
    for (auto& c : cs) c = c.trimmed();
    return DivisorPath(basis, std::move(cs));
}

ThreefoldLattice::ThreefoldLattice(Basis basis) : basis_(std::move(basis)) {}

std::size_t ThreefoldLattice::index(const std::string& name) const { return find_name(basis_, name); }

ThreefoldLattice::Key ThreefoldLattice::key(std::size_t i, std::size_t j, std::size_t k) {
    Key t{i, j, k};
    std::sort(t.begin(), t.end());
    return t;
}

bool ThreefoldLattice::killed(const Key& k) const {
    for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b)
            if (zero_pairs_.count({k[a], k[b]})) return true;
    return false;
}

void ThreefoldLattice::set(const std::string& a, const std::string& b, const std::string& c, const Rational& value) {
    Key k = key(index(a), index(b), index(c));
    if (!value.is_zero() && killed(k))
        throw std::invalid_argument("triple " + a + "." + b + "." + c + " conflicts with a zero pair");
    auto [it, inserted] = table_.emplace(k, value);
    if (!inserted && it->second != value)
        throw std::invalid_argument("triple " + a + "." + b + "." + c + " given twice with different values");
}

void ThreefoldLattice::zero_pair(const std::string& a, const std::string& b) {
    std::size_t i = index(a), j = index(b);
    zero_pairs_.insert({std::min(i, j), std::max(i, j)});
    for (const auto& [k, v] : table_)
        if (!v.is_zero() && killed(k))
            throw std::invalid_argument("zero pair " + a + "." + b + " conflicts with a nonzero triple");
}

Rational ThreefoldLattice::triple(std::size_t i, std::size_t j, std::size_t k) const {
    Key t = key(i, j, k);
    if (killed(t)) return Rational(0);
    auto it = table_.find(t);
    return it == table_.end() ? Rational(0) : it->second;
}

void ThreefoldLattice::check(const DivisorPath& d) const {
    if (d.basis() != basis_) throw std::invalid_argument("divisor: mismatched lattice");
}

Poly ThreefoldLattice::triple_eval(const DivisorPath& a, const DivisorPath& b, const DivisorPath& c) const {
    check(a);
    check(b);
    check(c);
    Poly sum(0);
    std::size_t n = basis_.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (a.coeff(i).is_zero()) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (b.coeff(j).is_zero()) continue;
            Poly ab = a.coeff(i) * b.coeff(j);
            for (std::size_t k = 0; k < n; ++k) {
                if (c.coeff(k).is_zero()) continue;
                Rational t = triple(i, j, k);
                if (!t.is_zero()) sum += (ab * c.coeff(k)).scaled(t);
            }
        }
    }
    return sum.trimmed();
}

SurfaceLattice::SurfaceLattice(Basis basis, RatMatrix gram) : basis_(std::move(basis)), gram_(std::move(gram)) {
    if (gram_.rows() != basis_.size() || gram_.cols() != basis_.size())
        throw std::invalid_argument("surface lattice: gram size mismatch");
    if (!gram_.symmetric()) throw std::invalid_argument("surface lattice: gram not symmetric");
}

std::size_t SurfaceLattice::index(const std::string& name) const { return find_name(basis_, name); }

void SurfaceLattice::check(const DivisorPath& d) const {
    if (d.basis() != basis_) throw std::invalid_argument("divisor: mismatched lattice");
}

Poly SurfaceLattice::pair_eval(const DivisorPath& a, const DivisorPath& b) const {
    check(a);
    check(b);
    Poly sum(0);
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        if (a.coeff(i).is_zero()) continue;
        for (std::size_t j = 0; j < basis_.size(); ++j)
            if (!gram_(i, j).is_zero() && !b.coeff(j).is_zero()) sum += (a.coeff(i) * b.coeff(j)).scaled(gram_(i, j));
    }
    return sum.trimmed();
}

Poly SurfaceLattice::pair_with(const DivisorPath& d, std::size_t i) const {
    check(d);
    Poly sum(0);
    for (std::size_t j = 0; j < basis_.size(); ++j)
        if (!gram_(i, j).is_zero()) sum += d.coeff(j).scaled(gram_(i, j));
    return sum.trimmed();
}

Poly CurveFunctional::pair(const DivisorPath& d) const {
    if (d.basis() != basis) throw std::invalid_argument("curve " + name + ": mismatched lattice");
    Poly sum(0);
    for (std::size_t i = 0; i < basis.size(); ++i) sum += d.coeff(i).scaled(pairing[i]);
    return sum.trimmed();
}

Restriction::Restriction(Basis from, Basis to, RatMatrix images)
    : from_(std::move(from)), to_(std::move(to)), images_(std::move(images)) {
    if (images_.rows() != from_.size() || images_.cols() != to_.size())
        throw std::invalid_argument("restriction: dimension mismatch");
}

DivisorPath Restriction::apply(const DivisorPath& d) const {
    if (d.basis() != from_) throw std::invalid_argument("restriction: source lattice mismatch");
    DivisorPath r(to_);
    std::vector<Poly> cs(to_.size(), Poly(0));
    for (std::size_t i = 0; i < from_.size(); ++i) {
        if (d.coeff(i).is_zero()) continue;
        for (std::size_t j = 0; j < to_.size(); ++j)
            if (!images_(i, j).is_zero()) cs[j] += d.coeff(i).scaled(images_(i, j));
    }
    for (auto& c : cs) c = c.trimmed();
    return DivisorPath(to_, std::move(cs));
}

}  // namespace kst
