#include "kst/matrix.hpp"

namespace kst {
namespace {

Rational exact_div(const Rational& a, const Rational& b) { return a / b; }

Poly exact_div(const Poly& a, const Poly& b) {
    auto q = a.div_exact(b);
    if (!q) throw std::logic_error("bareiss: inexact division " + a.str() + " / " + b.str());
    return *q;
}

// Fraction-free elimination (Bareiss).
template <class T>
T bareiss(Matrix<T> m) {
    if (!m.square()) throw std::invalid_argument("det: matrix not square");
    std::size_t n = m.rows();
    if (n == 0) return T(1);
    T prev(1);
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k).is_zero()) {
            std::size_t p = k + 1;
            while (p < n && m(p, k).is_zero()) ++p;
            if (p == n) return T(0);
            m.swap_rows(k, p);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                m(i, j) = exact_div(m(i, j) * m(k, k) - m(i, k) * m(k, j), prev);
        prev = m(k, k);
    }
    return sign > 0 ? m(n - 1, n - 1) : -m(n - 1, n - 1);
}

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(RatMatrix& m) {
    std::vector<std::size_t> piv;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && m(p, c).is_zero()) ++p;
        if (p == m.rows()) continue;
        m.swap_rows(r, p);
        Rational inv = m(r, c).inverse();
        for (std::size_t j = 0; j < m.cols(); ++j) m(r, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m(i, c).is_zero()) continue;
            Rational f = m(i, c);
            for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
        }
        piv.push_back(c);
        ++r;
    }
    return piv;
}

}  // namespace

Rational det(RatMatrix m) { return bareiss(std::move(m)); }
Poly det(PolyMatrix m) { return bareiss(std::move(m)); }

std::size_t rank(RatMatrix m) { return rref(m).size(); }

std::vector<std::vector<Rational>> kernel(const RatMatrix& m) {
    RatMatrix a = m;
    auto piv = rref(a);
    std::vector<bool> is_piv(a.cols(), false);
    for (auto c : piv) is_piv[c] = true;
    std::vector<std::vector<Rational>> basis;
    for (std::size_t f = 0; f < a.cols(); ++f) {
        if (is_piv[f]) continue;
        std::vector<Rational> v(a.cols(), Rational(0));
        v[f] = 1;
        for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -a(i, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

RatMatrix inverse(const RatMatrix& m) {
    if (!m.square()) throw std::invalid_argument("inverse: matrix not square");
    std::size_t n = m.rows();
    RatMatrix aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
        aug(i, n + i) = 1;
    }
    auto piv = rref(aug);
    if (piv.size() < n || piv[n - 1] != n - 1) throw std::domain_error("inverse: singular matrix");
    RatMatrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
    return inv;
}

std::vector<Rational> solve(const RatMatrix& m, const std::vector<Rational>& rhs) {
    if (rhs.size() != m.rows()) throw std::invalid_argument("solve: rhs length mismatch");
    RatMatrix inv = inverse(m);
    std::vector<Rational> x(m.cols(), Rational(0));
    for (std::size_t i = 0; i < m.cols(); ++i)
        for (std::size_t j = 0; j < rhs.size(); ++j) x[i] += inv(i, j) * rhs[j];
    return x;
}

RatMatrix specialize(const PolyMatrix& m, const VarValues& at) {
    RatMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).evaluate(at);
    return r;
}

PolyMatrix to_poly(const RatMatrix& m) {
    PolyMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Poly(m(i, j));
    return r;
}

LinearSolution solve_linear(const PolyMatrix& m, const std::vector<Poly>& rhs) {
    if (!m.square()) throw std::invalid_argument("solve_linear: matrix not square");
    if (rhs.size() != m.rows()) throw std::invalid_argument("solve_linear: rhs length mismatch");
    LinearSolution s;
    s.den = det(m);
    if (s.den.is_zero()) throw std::domain_error("solve_linear: singular matrix");
    for (std::size_t c = 0; c < m.cols(); ++c) {
        PolyMatrix mc = m;
        for (std::size_t i = 0; i < m.rows(); ++i) mc(i, c) = rhs[i];
        s.nums.push_back(det(mc));
    }
    for (const auto& n : s.nums) {
        Poly q;
        if (s.den.is_constant()) {
            q = n.scaled(s.den.constant_value().inverse());
        } else {
            auto d = n.div_exact(s.den);
            if (!d) {
                s.polynomial = false;
                s.values.clear();
                break;
            }
            q = *d;
        }
        s.values.push_back(q.trimmed());
    }
    return s;
}

}  // namespace kst
