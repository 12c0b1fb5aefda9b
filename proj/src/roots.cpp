#include "kst/roots.hpp"

#include <algorithm>
#include <stdexcept>

namespace kst {
namespace {

// Dense univariate polynomial, index = degree.
using Dense = std::vector<Rational>;

void trim(Dense& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

Dense to_dense(const Poly& p) {
    auto used = p.used_vars();
    if (used.size() > 1) throw std::invalid_argument("expected a univariate polynomial: " + p.str());
    if (p.has_negative_exponent()) throw std::invalid_argument("negative exponent in " + p.str());
    if (used.empty()) return p.is_zero() ? Dense{} : Dense{p.constant_value()};
    auto cs = p.coeffs_in(used[0]);
    Dense d;
    for (const auto& c : cs) d.push_back(c.constant_value());
    trim(d);
    return d;
}

Rational eval(const Dense& p, const Rational& x) {
    Rational r(0);
    for (auto it = p.rbegin(); it != p.rend(); ++it) r = r * x + *it;
    return r;
}

Dense deriv(const Dense& p) {
    Dense d;
    for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * Rational(static_cast<long>(i)));
    trim(d);
    return d;
}

// Remainder of a by b (b nonzero); quotient optional.
Dense rem(Dense a, const Dense& b, Dense* quot = nullptr) {
    if (quot) quot->assign(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, Rational(0));
    while (a.size() >= b.size() && !a.empty()) {
        Rational c = a.back() / b.back();
        std::size_t sh = a.size() - b.size();
        if (quot) (*quot)[sh] = c;
        for (std::size_t i = 0; i < b.size(); ++i) a[sh + i] -= c * b[i];
        a.pop_back();
        trim(a);
    }
    return a;
}

Dense gcd(Dense a, Dense b) {
    while (!b.empty()) {
        Dense r = rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        Rational lc = a.back();
        for (auto& c : a) c /= lc;
    }
    return a;
}

Dense squarefree(const Dense& p) {
    Dense g = gcd(p, deriv(p));
    Dense q;
    rem(p, g, &q);
    trim(q);
    return q;
}

struct Sturm {
    std::vector<Dense> seq;

    explicit Sturm(const Dense& p) {
        seq.push_back(p);
        seq.push_back(deriv(p));
        while (!seq.back().empty()) {
            Dense r = rem(seq[seq.size() - 2], seq.back());
            for (auto& c : r) c = -c;
            seq.push_back(std::move(r));
        }
        seq.pop_back();
    }

    int variations(const Rational& x) const {
        int v = 0, last = 0;
        for (const auto& s : seq) {
            int sg = eval(s, x).sign();
            if (sg == 0) continue;
            if (last != 0 && sg != last) ++v;
            last = sg;
        }
        return v;
    }

    // Distinct roots in (l, r].
    int count(const Rational& l, const Rational& r) const { return variations(l) - variations(r); }
};

// Either an exact root (lo == hi) or an open interval (lo, hi) holding exactly
// one root, with neither endpoint a root.
struct Item {
    Rational lo, hi;
    bool exact() const { return lo == hi; }
};

void isolate(const Dense& g, const Sturm& st, Rational l, Rational r, int n, std::vector<Item>& out) {
    if (n == 0) return;
    if (n == 1) {
        if (eval(g, r).is_zero()) {
            out.push_back({r, r});
            return;
        }
        while (eval(g, l).is_zero()) {
            Rational m = (l + r) / Rational(2);
            if (eval(g, m).is_zero()) {
                out.push_back({m, m});
                return;
            }
            if (st.count(l, m) == 1) r = m;
            else l = m;
        }
        out.push_back({l, r});
        return;
    }
    Rational m = (l + r) / Rational(2);
    int c = st.count(l, m);
    isolate(g, st, l, m, c, out);
    isolate(g, st, m, r, n - c, out);
}

std::vector<Item> isolate_all(const Dense& g, const Rational& a, const Rational& b) {
    std::vector<Item> out;
    if (g.size() <= 1 || a > b) return out;
    if (eval(g, a).is_zero()) out.push_back({a, a});
    if (a == b) return out;
    Sturm st(g);
    isolate(g, st, a, b, st.count(a, b), out);
    return out;
}

std::vector<mpz_class> divisors(mpz_class n) {
    n = abs(n);
    std::vector<mpz_class> small, large;
    for (mpz_class d = 1; d * d <= n; ++d)
        if (n % d == 0) {
            small.push_back(d);
            if (d * d != n) large.push_back(n / d);
        }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

mpz_class floor_q(const Rational& x) {
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), x.num().get_mpz_t(), x.den().get_mpz_t());
    return f;
}

}  // namespace

std::size_t count_real_roots(const Poly& p, const Rational& a, const Rational& b) {
    Dense d = to_dense(p);
    if (d.empty()) throw std::domain_error("count_real_roots: zero polynomial");
    return isolate_all(squarefree(d), a, b).size();
}

RootReport rational_roots(const Poly& p, const Rational& a, const Rational& b) {
    Dense d = to_dense(p);
    if (d.empty()) throw std::domain_error("rational_roots: zero polynomial");
    Dense g = squarefree(d);
    RootReport rep;
    if (g.size() <= 1) return rep;

    // Primitive integer form of g: lcm of denominators, leading coefficient.
    mpz_class l = 1;
    for (const auto& c : g) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.den().get_mpz_t());
    mpz_class lead = (g.back() * Rational(l)).num();
    auto qs = divisors(lead);
    Rational sep = Rational(mpz_class(1), lead * lead);  // candidates are this far apart

    for (Item it : isolate_all(g, a, b)) {
        if (it.exact()) {
            rep.roots.push_back(it.lo);
            continue;
        }
        Sturm st(g);
        while (it.hi - it.lo >= sep) {
            Rational m = (it.lo + it.hi) / Rational(2);
            if (eval(g, m).is_zero()) {
                it.lo = it.hi = m;
                break;
            }
            if (st.count(it.lo, m) == 1) it.hi = m;
            else it.lo = m;
        }
        if (it.exact()) {
            rep.roots.push_back(it.lo);
            continue;
        }
        bool found = false;
        for (const auto& q : qs) {
            mpz_class k = floor_q(it.lo * Rational(q)) + 1;
            Rational x(k, q);
            if (x < it.hi && eval(g, x).is_zero()) {
                rep.roots.push_back(x);
                found = true;
                break;
            }
        }
        if (!found) rep.residual = true;
    }
    std::sort(rep.roots.begin(), rep.roots.end());
    return rep;
}

bool nonneg_on(const Poly& p, const Rational& a, const Rational& b) {
    Dense d = to_dense(p);
    if (d.empty()) return true;
    if (a > b) throw std::invalid_argument("nonneg_on: empty interval");
    auto items = isolate_all(squarefree(d), a, b);
    std::vector<Rational> samples{a, b};
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (!items[i].exact()) {
            samples.push_back(items[i].lo);
            samples.push_back(items[i].hi);
        } else if (i + 1 < items.size() && items[i + 1].exact()) {
            samples.push_back((items[i].lo + items[i + 1].lo) / Rational(2));
        }
    }
    for (const auto& x : samples)
        if (x >= a && x <= b && eval(d, x).sign() < 0) return false;
    return true;
}

}  // namespace kst
