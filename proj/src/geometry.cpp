#include "kst/geometry.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace kst {

QuadraticForm QuadraticForm::from_poly(const Poly& q, const std::vector<std::string>& vars) {
    std::size_t n = vars.size();
    QuadraticForm f{vars, PolyMatrix(n, n)};
    std::vector<int> pos;
    for (const auto& v : vars) pos.push_back(q.var_index(v));
    std::vector<std::string> rest;
    for (const auto& v : q.vars())
        if (std::find(vars.begin(), vars.end(), v) == vars.end()) rest.push_back(v);
    for (const auto& [e, c] : q.terms()) {
        std::vector<std::size_t> hit;
        for (std::size_t i = 0; i < n; ++i) {
            int k = pos[i] < 0 ? 0 : e[pos[i]];
            if (k < 0) throw std::invalid_argument("quadratic form: negative exponent in " + vars[i]);
            for (int j = 0; j < k; ++j) hit.push_back(i);
        }
        if (hit.size() != 2) throw std::invalid_argument("quadratic form: term not of degree 2 in the form variables");
        Mono r;
        for (const auto& v : rest) r.push_back(e[q.var_index(v)]);
        Poly coeff = Poly::monomial(rest, r, c);
        if (hit[0] == hit[1]) {
            f.M(hit[0], hit[0]) += coeff;
        } else {
            Poly half = coeff.scaled(Rational(1, 2));
            f.M(hit[0], hit[1]) += half;
            f.M(hit[1], hit[0]) += half;
        }
    }
    return f;
}

Poly QuadraticForm::poly() const {
    Poly s(0);
    for (std::size_t i = 0; i < vars.size(); ++i)
        for (std::size_t j = 0; j < vars.size(); ++j) s += M(i, j) * Poly::var(vars[i]) * Poly::var(vars[j]);
    return s.trimmed();
}

RatMatrix QuadraticForm::at(const VarValues& params) const {
    for (std::size_t i = 0; i < M.rows(); ++i)
        for (std::size_t j = 0; j < M.cols(); ++j)
            for (const auto& v : M(i, j).used_vars())
                if (!params.count(v)) throw std::invalid_argument("quadratic form: missing parameter '" + v + "'");
    return specialize(M, params);
}

std::size_t quadric_rank_at(const QuadraticForm& q, const VarValues& params) { return rank(q.at(params)); }

SingularLocus singular_kernel(const QuadraticForm& q, const VarValues& params) {
    RatMatrix m = q.at(params);
    SingularLocus s;
    s.rank = rank(m);
    s.kernel = kernel(m);
    if (s.kernel.size() == 1) {
        s.point = s.kernel[0];
        auto it = std::find_if(s.point.begin(), s.point.end(), [](const Rational& x) { return !x.is_zero(); });
        Rational k = it->inverse();
        for (auto& x : s.point) x *= k;
    }
    return s;
}

std::size_t jacobian_rank_at(const PolySystem& sys, const ProjPoint& pt) {
    if (pt.size() != sys.factors.size()) throw std::invalid_argument("jacobian: point has the wrong number of factors");
    VarValues at;
    std::vector<std::string> cols;
    for (std::size_t k = 0; k < pt.size(); ++k) {
        const auto& names = sys.factors[k];
        if (pt[k].size() != names.size()) throw std::invalid_argument("jacobian: factor dimension mismatch");
        auto nz = std::find_if(pt[k].begin(), pt[k].end(), [](const Rational& x) { return !x.is_zero(); });
        if (nz == pt[k].end()) throw std::invalid_argument("jacobian: factor with all coordinates zero");
        std::size_t chart = static_cast<std::size_t>(nz - pt[k].begin());
        Rational s = nz->inverse();
        for (std::size_t i = 0; i < names.size(); ++i) {
            at[names[i]] = pt[k][i] * s;
            if (i != chart) cols.push_back(names[i]);
        }
    }
    for (std::size_t e = 0; e < sys.equations.size(); ++e) {
        Rational val = sys.equations[e].evaluate(at);
        if (!val.is_zero())
            throw std::domain_error("jacobian: point is off the variety (equation " + std::to_string(e + 1) +
                                    " gives " + val.str() + ")");
    }
    RatMatrix J(sys.equations.size(), cols.size());
    for (std::size_t e = 0; e < sys.equations.size(); ++e)
        for (std::size_t j = 0; j < cols.size(); ++j) J(e, j) = sys.equations[e].uses(cols[j]) ? sys.equations[e].diff(cols[j]).evaluate(at) : Rational(0);
    return rank(J);
}

QuadraticForm conic_fiber_form(const Poly& quadric, const std::map<std::string, Poly>& substitution,
                               const std::vector<std::string>& fiber_vars) {
    return QuadraticForm::from_poly(quadric.substitute(substitution, false).trimmed(), fiber_vars);
}

Poly discriminant(const QuadraticForm& q) {
    if (!q.M.square()) throw std::invalid_argument("discriminant: matrix not square");
    return det(q.M).trimmed();
}

bool proportional(const Poly& p, const Poly& q, Rational* factor) {
    if (p.is_zero() || q.is_zero()) {
        if (factor) *factor = Rational(p.is_zero() && q.is_zero() ? 1 : 0);
        return p.is_zero() && q.is_zero();
    }
    std::set<std::string> u;
    for (const auto& v : p.used_vars()) u.insert(v);
    for (const auto& v : q.used_vars()) u.insert(v);
    std::vector<std::string> vars(u.begin(), u.end());
    Poly a = p.with_vars(vars), b = q.with_vars(vars);
    if (a.leading_mono() != b.leading_mono()) return false;
    Rational c = a.leading_coeff() / b.leading_coeff();
    if (a != b.scaled(c)) return false;
    if (factor) *factor = c;
    return true;
}

std::vector<Rational> gradient_at(const Poly& q, const std::vector<std::string>& vars, const VarValues& at) {
    std::vector<Rational> g;
    for (const auto& v : vars) g.push_back(q.uses(v) ? q.diff(v).evaluate(at) : Rational(0));
    return g;
}

}  // namespace kst
