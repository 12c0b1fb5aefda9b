#include "kst/zariski.hpp"

#include "kst/roots.hpp"

#include <algorithm>
#include <stdexcept>

namespace kst {

NegativeCurvePool NegativeCurvePool::from_names(const SurfaceLattice& s, const std::vector<std::string>& names) {
    NegativeCurvePool p;
    for (const auto& n : names) p.candidates.push_back(s.index(n));
    std::sort(p.candidates.begin(), p.candidates.end());
    p.candidates.erase(std::unique(p.candidates.begin(), p.candidates.end()), p.candidates.end());
    return p;
}

bool negative_definite(const SurfaceLattice& s, const std::vector<std::size_t>& idx) {
    // Sylvester's criterion on -G.
    for (std::size_t k = 1; k <= idx.size(); ++k) {
        RatMatrix m(k, k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) m(i, j) = -s.pair(idx[i], idx[j]);
        if (det(m).sign() <= 0) return false;
    }
    return true;
}

SymbolicParts solve_active(const SurfaceLattice& s, const DivisorPath& D, const std::vector<std::size_t>& active) {
    DivisorPath N(s.basis());
    if (active.empty()) return {D, N};
    std::size_t k = active.size();
    PolyMatrix G(k, k);
    std::vector<Poly> rhs;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) G(i, j) = Poly(s.pair(active[i], active[j]));
        rhs.push_back(s.pair_with(D, active[i]));
    }
    LinearSolution x = solve_linear(G, rhs);
    if (!x.polynomial) throw std::domain_error("zariski: negative part is not polynomial in the parameters");
    std::vector<Poly> cs(s.basis().size(), Poly(0));
    for (std::size_t i = 0; i < k; ++i) cs[active[i]] = x.values[i];
    N = DivisorPath(s.basis(), cs);
    return {D - N, N};
}

namespace {

void self_check(const SurfaceLattice& s, const DivisorPath& D, const NegativeCurvePool& pool, const Decomposition& d) {
    if (d.P + d.N != D) throw std::logic_error("zariski: P + N != D");
    for (auto c : pool.candidates) {
        Rational pc = s.pair_with(d.P, c).constant_value();
        bool act = std::binary_search(d.active.begin(), d.active.end(), c);
        if (act && !pc.is_zero()) throw std::logic_error("zariski: P not orthogonal to " + s.basis()[c]);
        if (pc.sign() < 0) throw std::logic_error("zariski: P negative on " + s.basis()[c]);
    }
    for (const auto& c : d.N.constant_coeffs())
        if (c.sign() < 0) throw std::logic_error("zariski: negative coefficient in N");
}

}  // namespace

Decomposition zariski_decompose(const SurfaceLattice& s, const DivisorPath& D, const NegativeCurvePool& pool) {
    D.constant_coeffs();  // rational input only
    Decomposition d{D, DivisorPath(s.basis()), {}};
    for (std::size_t round = 0; round <= pool.candidates.size(); ++round) {
        std::vector<std::size_t> grow;
        for (auto c : pool.candidates) {
            if (std::binary_search(d.active.begin(), d.active.end(), c)) continue;
            if (s.pair_with(d.P, c).constant_value().sign() < 0) grow.push_back(c);
        }
        if (grow.empty()) break;
        if (round == pool.candidates.size()) throw std::logic_error("zariski: active set did not stabilize");
        d.active.insert(d.active.end(), grow.begin(), grow.end());
        std::sort(d.active.begin(), d.active.end());
        if (!negative_definite(s, d.active))
            throw std::domain_error("zariski: active set is not negative definite (pool unsuitable)");
        auto parts = solve_active(s, D, d.active);
        d.P = parts.P;
        d.N = parts.N;
    }
    for (const auto& c : d.N.constant_coeffs())
        if (c.sign() < 0) throw std::domain_error("zariski: negative coefficient in N (divisor not pseudoeffective)");
    self_check(s, D, pool, d);
    return d;
}

namespace {

struct Cond {
    std::string id;
    Poly p;
};

std::vector<Cond> conditions(const SurfaceLattice& s, const SymbolicParts& parts,
                             const std::vector<std::size_t>& active, const NegativeCurvePool& pool) {
    std::vector<Cond> out;
    for (auto c : active) out.push_back({"N:" + s.basis()[c], parts.N.coeff(c)});
    for (auto c : pool.candidates)
        if (!std::binary_search(active.begin(), active.end(), c))
            out.push_back({"PC:" + s.basis()[c], s.pair_with(parts.P, c)});
    out.push_back({"vol", s.square(parts.P)});
    return out;
}

// Cauchy bound on the absolute value of the real roots.
Rational root_bound(const Poly& p, const std::string& v) {
    auto cs = p.coeffs_in(v);
    Rational lead = cs.back().constant_value().abs(), m(0);
    for (std::size_t i = 0; i + 1 < cs.size(); ++i) m = max(m, cs[i].constant_value().abs() / lead);
    return Rational(1) + m;
}

std::string join(const std::vector<std::string>& xs) {
    std::string r;
    for (const auto& x : xs) r += (r.empty() ? "" : ",") + x;
    return r;
}

bool has_id(const std::string& ends_by, const std::string& id) {
    std::size_t pos = 0;
    while (pos <= ends_by.size()) {
        auto next = ends_by.find(',', pos);
        if (ends_by.substr(pos, next == std::string::npos ? std::string::npos : next - pos) == id) return true;
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return false;
}

}  // namespace

std::vector<VPiece> walk_v(const SurfaceLattice& s, const DivisorPath& D, const NegativeCurvePool& pool,
                           const std::string& v, const Rational& v0, const std::optional<Rational>& v_hi) {
    std::vector<VPiece> out;
    Rational cur = v0;
    for (int guard = 0; guard < 4 * static_cast<int>(pool.candidates.size()) + 8; ++guard) {
        if (v_hi && cur >= *v_hi) return out;
        auto here = zariski_decompose(s, D.eval_partial({{v, cur}}), pool);
        if (s.square(here.P).constant_value().is_zero()) return out;

        Rational h = v_hi ? (*v_hi - cur) / Rational(2) : Rational(1, 2);
        bool done = false;
        for (int tries = 0; tries < 80 && !done; ++tries, h /= Rational(2)) {
            Rational vs = cur + h;
            Decomposition at;
            try {
                at = zariski_decompose(s, D.eval_partial({{v, vs}}), pool);
            } catch (const std::domain_error&) {
                continue;
            }
            auto parts = solve_active(s, D, at.active);
            auto conds = conditions(s, parts, at.active, pool);

            std::optional<Rational> first;
            for (const auto& c : conds) {
                if (c.p.is_zero() || c.p.is_constant()) continue;
                Rational B = max(cur, root_bound(c.p, v));
                for (const auto& r : rational_roots(c.p, cur, B).roots)
                    if (r > cur && (!first || r < *first)) first = r;
            }
            bool window = false;
            if (v_hi && (!first || *first >= *v_hi)) {
                window = !first || *first > *v_hi;
                first = *v_hi;
            }
            if (!first) throw std::domain_error("zariski: no threshold found along " + v);
            for (const auto& c : conds) {
                if (c.p.is_zero() || c.p.is_constant()) continue;
                std::size_t n = count_real_roots(c.p, cur, *first);
                if (c.p.evaluate({{v, cur}}).is_zero()) --n;
                if (c.p.evaluate({{v, *first}}).is_zero()) --n;
                if (n > 0) throw std::domain_error("zariski: irrational breakpoint in condition " + c.id);
            }
            if (vs >= *first) continue;

            std::vector<std::string> ids;
            for (const auto& c : conds)
                if (!c.p.is_zero() && c.p.evaluate({{v, *first}}).is_zero()) ids.push_back(c.id);
            if (window) ids = {"window"};
            std::sort(ids.begin(), ids.end());
            out.push_back({Poly(cur), Poly(*first), at.active, parts.P, parts.N, join(ids)});
            cur = *first;
            done = true;
        }
        if (!done) throw std::domain_error("zariski: could not resolve the chamber after v = " + cur.str());
        if (has_id(out.back().ends_by, "vol") || out.back().ends_by == "window") return out;
    }
    throw std::logic_error("zariski: too many chambers");
}

namespace {

Poly interpolate(const std::vector<Rational>& xs, const std::vector<Rational>& ys, const std::string& var) {
    Poly sum(0);
    Poly x = Poly::var(var);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        Poly term(ys[i]);
        for (std::size_t j = 0; j < xs.size(); ++j)
            if (j != i) term *= (x - Poly(xs[j])).scaled((xs[i] - xs[j]).inverse());
        sum += term;
    }
    return sum.trimmed();
}

struct Chamber {
    std::vector<std::size_t> active;
    std::string ends_by;
    Poly curve;
};

using Fit = std::vector<Chamber>;

bool same_fit(const Fit& a, const Fit& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].active != b[i].active || a[i].ends_by != b[i].ends_by || a[i].curve != b[i].curve) return false;
    return true;
}

struct Walker {
    const SurfaceLattice& s;
    const NegativeCurvePool& pool;
    const std::string &u, &v;

    std::vector<VPiece> at(const DivisorPath& D, const Rational& u0) const {
        return walk_v(s, D.eval_partial({{u, u0}}), pool, v, Rational(0));
    }

    static bool same_signature(const std::vector<VPiece>& a, const std::vector<VPiece>& b) {
        if (a.size() != b.size()) return false;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i].active != b[i].active || a[i].ends_by != b[i].ends_by) return false;
        return true;
    }

    // Fits breakpoint curves from walks at us; nullopt if the walks disagree.
    std::optional<Fit> fit(const DivisorPath& D, const std::vector<Rational>& us) const {
        std::vector<std::vector<VPiece>> walks;
        for (const auto& x : us) walks.push_back(at(D, x));
        for (std::size_t i = 1; i < walks.size(); ++i)
            if (!same_signature(walks[0], walks[i])) return std::nullopt;
        Fit f;
        for (std::size_t c = 0; c < walks[0].size(); ++c) {
            std::vector<Rational> ys;
            for (const auto& w : walks) ys.push_back(w[c].hi.constant_value());
            Poly curve = interpolate(us, ys, u);
            // The curve must be a root of every condition that ends the chamber.
            auto parts = solve_active(s, D, walks[0][c].active);
            auto conds = conditions(s, parts, walks[0][c].active, pool);
            for (const auto& cd : conds) {
                if (!has_id(walks[0][c].ends_by, cd.id)) continue;
                if (!cd.p.substitute({{v, curve}}, false).is_zero()) return std::nullopt;
            }
            f.push_back({walks[0][c].active, walks[0][c].ends_by, curve});
        }
        return f;
    }

    // Fit from sample points clustered at one end of [a, b].
    Fit end_fit(const DivisorPath& D, const Rational& a, const Rational& b, bool left) const {
        for (int scale = 1; scale <= 1 << 12; scale *= 4) {
            std::vector<Rational> us;
            for (int k = 8; k <= 12; ++k) {
                Rational off = (b - a) / Rational(static_cast<long>(k) * scale);
                us.push_back(left ? a + off : b - off);
            }
            if (auto f = fit(D, us)) return *f;
        }
        throw std::domain_error("zariski: no stable chamber structure near u = " + (left ? a : b).str());
    }

    bool interior_ok(const DivisorPath& D, const Rational& a, const Rational& b, const Fit& f) const {
        for (int k = 1; k <= 3; ++k) {
            Rational x = a + (b - a) * Rational(k, 4);
            auto w = at(D, x);
            if (w.size() != f.size()) return false;
            for (std::size_t i = 0; i < w.size(); ++i)
                if (w[i].active != f[i].active || w[i].hi.constant_value() != f[i].curve.evaluate({{u, x}}))
                    return false;
        }
        return true;
    }

    UPiece build(const DivisorPath& D, const Rational& a, const Rational& b, const Fit& f) const {
        UPiece p{a, b, {}};
        Poly lo(0);
        for (const auto& c : f) {
            auto parts = solve_active(s, D, c.active);
            p.chambers.push_back({lo, c.curve, c.active, parts.P, parts.N, c.ends_by});
            lo = c.curve;
        }
        return p;
    }

    void run(const DivisorPath& D, Rational a, const Rational& b, std::vector<UPiece>& out) const {
        for (int guard = 0; guard < 16; ++guard) {
            Fit L = end_fit(D, a, b, true);
            Fit R = end_fit(D, a, b, false);
            if (same_fit(L, R) && interior_ok(D, a, b, L)) {
                out.push_back(build(D, a, b, L));
                return;
            }
            std::vector<Poly> curves;
            for (const auto& c : L) curves.push_back(c.curve);
            for (const auto& c : R) curves.push_back(c.curve);
            std::vector<Rational> cands;
            for (std::size_t i = 0; i < curves.size(); ++i)
                for (std::size_t j = i + 1; j < curves.size(); ++j) {
                    Poly d = curves[i] - curves[j];
                    if (d.is_zero() || d.is_constant()) continue;
                    for (const auto& r : rational_roots(d, a, b).roots)
                        if (r > a && r < b) cands.push_back(r);
                }
            std::sort(cands.begin(), cands.end());
            cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
            bool split = false;
            for (const auto& c : cands) {
                Fit Lc = end_fit(D, a, c, false);
                if (same_fit(L, Lc) && interior_ok(D, a, c, L)) {
                    out.push_back(build(D, a, c, L));
                    a = c;
                    split = true;
                    break;
                }
            }
            if (!split) throw std::domain_error("zariski: could not split u-interval [" + a.str() + ", " + b.str() + "]");
        }
        throw std::logic_error("zariski: too many u-splits");
    }
};

bool same_chambers(const std::vector<VPiece>& a, const std::vector<VPiece>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].lo != b[i].lo || a[i].hi != b[i].hi || a[i].P != b[i].P || a[i].N != b[i].N) return false;
    return true;
}

}  // namespace

SurfaceSchedule parametric_zariski(const SurfaceLattice& s, const std::vector<UClass>& pieces,
                                   const NegativeCurvePool& pool, const std::string& u, const std::string& v) {
    SurfaceSchedule out;
    out.u_var = u;
    out.v_var = v;
    Walker w{s, pool, u, v};
    for (const auto& p : pieces) {
        if (p.ua == p.ub) {
            UPiece up{p.ua, p.ub, w.at(p.D, p.ua)};
            out.pieces.push_back(std::move(up));
        } else {
            w.run(p.D, p.ua, p.ub, out.pieces);
        }
    }
    return out;
}

PiecewisePoly SurfaceSchedule::threshold() const {
    std::vector<Rational> br;
    std::vector<Poly> ps;
    for (const auto& p : pieces) {
        if (!br.empty() && br.back() != p.ua) throw std::invalid_argument("schedule: u-pieces not contiguous");
        if (br.empty()) br.push_back(p.ua);
        br.push_back(p.ub);
        ps.push_back(p.chambers.empty() ? Poly(0) : p.chambers.back().hi);
    }
    return PiecewisePoly(u_var, br, ps);
}

SurfaceSchedule SurfaceSchedule::normalized() const {
    SurfaceSchedule r;
    r.u_var = u_var;
    r.v_var = v_var;
    for (const auto& p : pieces) {
        if (!r.pieces.empty() && r.pieces.back().ub == p.ua && same_chambers(r.pieces.back().chambers, p.chambers))
            r.pieces.back().ub = p.ub;
        else
            r.pieces.push_back(p);
    }
    return r;
}

bool same_schedule(const SurfaceSchedule& a, const SurfaceSchedule& b, std::string* why) {
    auto x = a.normalized(), y = b.normalized();
    auto say = [&](const std::string& m) {
        if (why) *why = m;
        return false;
    };
    if (x.pieces.size() != y.pieces.size())
        return say("u-piece count " + std::to_string(x.pieces.size()) + " vs " + std::to_string(y.pieces.size()));
    for (std::size_t i = 0; i < x.pieces.size(); ++i) {
        const auto &p = x.pieces[i], &q = y.pieces[i];
        std::string where = "u in [" + p.ua.str() + ", " + p.ub.str() + "]";
        if (p.ua != q.ua || p.ub != q.ub) return say("u-breakpoints differ at piece " + std::to_string(i));
        if (p.chambers.size() != q.chambers.size()) return say(where + ": chamber count differs");
        for (std::size_t k = 0; k < p.chambers.size(); ++k) {
            const auto &c = p.chambers[k], &d = q.chambers[k];
            std::string ch = where + ", chamber " + std::to_string(k);
            if (c.lo != d.lo || c.hi != d.hi)
                return say(ch + ": bounds [" + c.lo.str() + ", " + c.hi.str() + "] vs [" + d.lo.str() + ", " +
                           d.hi.str() + "]");
            if (c.P != d.P) return say(ch + ": P " + c.P.str() + " vs " + d.P.str());
            if (c.N != d.N) return say(ch + ": N " + c.N.str() + " vs " + d.N.str());
        }
    }
    return true;
}

PiecewisePoly pseff_threshold(const SurfaceLattice& s, const std::vector<UClass>& pieces,
                              const NegativeCurvePool& pool, const std::string& u, const std::string& v) {
    return parametric_zariski(s, pieces, pool, u, v).normalized().threshold();
}

namespace {

const UClass* owning(const std::vector<UClass>& pieces, const UPiece& p) {
    for (const auto& c : pieces)
        if (c.ua <= p.ua && p.ub <= c.ub) return &c;
    return nullptr;
}

std::vector<Rational> u_samples(const Rational& a, const Rational& b) {
    if (a == b) return {a};
    std::vector<Rational> r;
    for (int k = 0; k <= 6; ++k) r.push_back(a + (b - a) * Rational(k, 6));
    return r;
}

}  // namespace

VerifyReport verify_schedule(const SurfaceLattice& s, const SurfaceSchedule& sched, const std::vector<UClass>& pieces,
                             const NegativeCurvePool& pool) {
    VerifyReport rep;
    const std::string &u = sched.u_var, &v = sched.v_var;
    for (const auto& p : sched.pieces) {
        std::string where = "u in [" + p.ua.str() + ", " + p.ub.str() + "]";
        const UClass* cls = owning(pieces, p);
        if (!cls) {
            rep.fail(where + ": no divisor class covers this window");
            continue;
        }
        if (p.chambers.empty()) {
            rep.fail(where + ": no chambers");
            continue;
        }
        if (!p.chambers.front().lo.is_zero()) rep.fail(where + ": first chamber does not start at " + v + " = 0");
        for (std::size_t k = 0; k < p.chambers.size(); ++k) {
            const auto& c = p.chambers[k];
            std::string ch = where + ", chamber " + std::to_string(k);
            if (c.P + c.N != cls->D) rep.fail(ch + ": P + N differs from the divisor");
            std::vector<std::size_t> supp;
            for (std::size_t i = 0; i < s.basis().size(); ++i)
                if (!c.N.coeff(i).is_zero()) supp.push_back(i);
            for (auto i : supp) {
                if (!std::binary_search(pool.candidates.begin(), pool.candidates.end(), i))
                    rep.fail(ch + ": " + s.basis()[i] + " in N is not a pool curve");
                if (!s.pair_with(c.P, i).is_zero()) rep.fail(ch + ": P not orthogonal to " + s.basis()[i]);
            }
            if (!negative_definite(s, supp)) rep.fail(ch + ": support of N not negative definite");
            if (k + 1 < p.chambers.size()) {
                const auto& d = p.chambers[k + 1];
                if (c.hi != d.lo) rep.fail(ch + ": chambers not adjacent");
                Poly left = s.square(c.P).substitute({{v, c.hi}}, false);
                Poly right = s.square(d.P).substitute({{v, d.lo}}, false);
                if (left != right) rep.fail(ch + ": P^2 discontinuous at the wall");
            }
            for (const auto& x : u_samples(p.ua, p.ub)) {
                VarValues at{{u, x}};
                Rational lo = c.lo.eval_partial(at).trimmed().constant_value();
                Rational hi = c.hi.eval_partial(at).trimmed().constant_value();
                std::string pt = ch + " at " + u + " = " + x.str();
                if (lo > hi) {
                    rep.fail(pt + ": empty chamber");
                    continue;
                }
                for (auto i : supp)
                    if (!nonneg_on(c.N.coeff(i).eval_partial(at).trimmed(), lo, hi))
                        rep.fail(pt + ": negative coefficient of " + s.basis()[i] + " in N");
                for (auto i : pool.candidates)
                    if (!nonneg_on(s.pair_with(c.P, i).eval_partial(at).trimmed(), lo, hi))
                        rep.fail(pt + ": P negative on " + s.basis()[i]);
                if (!nonneg_on(s.square(c.P).eval_partial(at).trimmed(), lo, hi))
                    rep.fail(pt + ": negative volume");
            }
        }
        const auto& last = p.chambers.back();
        if (!s.square(last.P).substitute({{v, last.hi}}, false).is_zero())
            rep.fail(where + ": volume does not vanish at the threshold");
    }
    rep.notes.push_back("nefness and pseudoeffectivity are certified relative to the declared curve pool");
    return rep;
}

PiecewisePoly volume_function(const ThreefoldLattice& X, const ThreefoldSchedule& sched) {
    std::vector<Poly> cubes;
    for (const auto& P : sched.P) cubes.push_back(X.cube(P));
    return PiecewisePoly(sched.var, sched.breaks, cubes);
}

VerifyReport verify_schedule(const ThreefoldLattice& X, const ThreefoldSchedule& sched, const DivisorPath& D,
                             const std::vector<CurveFunctional>& curves) {
    VerifyReport rep;
    if (sched.breaks.size() != sched.P.size() + 1 || sched.P.size() != sched.N.size() || sched.P.empty() ||
        (!sched.N_terms.empty() && sched.N_terms.size() != sched.N.size())) {
        rep.fail("schedule: malformed intervals");
        return rep;
    }
    for (std::size_t i = 1; i < sched.breaks.size(); ++i)
        if (!(sched.breaks[i - 1] < sched.breaks[i])) rep.fail("schedule: breakpoints not increasing");
    const std::string& u = sched.var;
    for (std::size_t k = 0; k < sched.size(); ++k) {
        const Rational &a = sched.breaks[k], &b = sched.breaks[k + 1];
        std::string where = u + " in [" + a.str() + ", " + b.str() + "]";
        const auto &P = sched.P[k], &N = sched.N[k];
        if (P + N != D) rep.fail(where + ": P + N differs from the divisor");
        if (!sched.N_terms.empty()) {
            DivisorPath sum(N.basis());
            for (const auto& t : sched.N_terms.at(k)) {
                if (!nonneg_on(t.coeff, a, b)) rep.fail(where + ": negative coefficient of " + t.name + " in N");
                sum += t.cls.scaled(t.coeff);
            }
            if (sum != N) rep.fail(where + ": N differs from the sum of its terms");
        } else {
            for (std::size_t i = 0; i < N.size(); ++i)
                if (!nonneg_on(N.coeff(i), a, b))
                    rep.fail(where + ": negative coefficient of " + N.basis()[i] + " in N");
        }
        for (const auto& c : curves)
            if (!nonneg_on(c.pair(P), a, b)) rep.fail(where + ": P negative on test curve " + c.name);
        if (k + 1 < sched.size()) {
            VarValues at{{u, b}};
            if (X.cube(P).eval_partial(at) != X.cube(sched.P[k + 1]).eval_partial(at))
                rep.fail(where + ": P^3 discontinuous at " + u + " = " + b.str());
        }
    }
    Poly last = X.cube(sched.P.back()).eval_partial({{u, sched.breaks.back()}});
    if (!last.is_zero()) rep.notes.push_back("P^3 at the end of the window is " + last.str());
    rep.notes.push_back("orthogonality of P to N is not checked on threefolds");
    return rep;
}

}  // namespace kst
