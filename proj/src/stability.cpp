#include "kst/stability.hpp"

#include <functional>
#include <stdexcept>

namespace kst {

Rational s_invariant(const FujitaScenario& sc, Trace* trace) {
    const auto& sched = sc.schedule;
    auto rep = verify_schedule(sc.X, sched, sc.D, sc.curves);
    if (!rep.pass) throw std::domain_error("unverified schedule: " + rep.failure);
    Rational cube0 = sc.X.cube(sc.D).evaluate({{sched.var, sched.breaks.front()}});
    if (cube0 != sc.V)
        throw std::domain_error("normalizer mismatch: V = " + sc.V.str() + " but D^3 = " + cube0.str());
    if (sc.V.sign() <= 0) throw std::domain_error("normalizer must be positive");
    PiecewisePoly vol = volume_function(sc.X, sched);
    Rational total(0);
    for (std::size_t i = 0; i < sched.size(); ++i) {
        Rational part = vol.integrate_value(sched.breaks[i], sched.breaks[i + 1]);
        if (trace)
            trace->push_back("int_[" + sched.breaks[i].str() + "," + sched.breaks[i + 1].str() + "] " +
                             vol.pieces()[i].str() + " d" + sched.var + " = " + part.str());
        total += part;
    }
    return total / sc.V;
}

Rational beta(const FujitaScenario& sc, Trace* trace) { return sc.A - s_invariant(sc, trace); }

std::vector<UClass> restrict_schedule(const ThreefoldSchedule& sched, const Restriction& r, const DivisorPath& C,
                                      const std::string& v) {
    std::vector<UClass> out;
    for (std::size_t i = 0; i < sched.size(); ++i)
        out.push_back({sched.breaks[i], sched.breaks[i + 1], r.apply(sched.P[i]) - C.scaled(Poly::var(v))});
    return out;
}

SurfaceSchedule flag_schedule(const FlagScenario& f) {
    if (f.declared) {
        auto rep = verify_schedule(f.S, *f.declared, f.restricted, f.pool);
        if (!rep.pass) throw std::domain_error("declared surface schedule fails: " + rep.failure);
        return *f.declared;
    }
    return parametric_zariski(f.S, f.restricted, f.pool);
}

namespace {

void check_window(const SurfaceSchedule& s, const std::optional<PiecewisePoly>& w, const char* what) {
    if (!w || s.pieces.empty()) return;
    if (w->lo() != s.pieces.front().ua || w->hi() != s.pieces.back().ub)
        throw std::invalid_argument(std::string("window mismatch between ") + what + " and the threshold t(u)");
}

// Sum over chambers of the double integral of integrand(chamber) * weight(u).
Poly integrate_chambers(const SurfaceSchedule& sched, const std::function<Poly(const VPiece&)>& integrand,
                        const std::optional<PiecewisePoly>& weight, Trace* trace, const std::string& label) {
    const std::string &u = sched.u_var, &v = sched.v_var;
    Poly total(0);
    for (const auto& p : sched.pieces) {
        std::vector<Rational> cuts{p.ua};
        if (weight)
            for (const auto& b : weight->breaks())
                if (b > p.ua && b < p.ub) cuts.push_back(b);
        cuts.push_back(p.ub);
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const Rational &a = cuts[i], &b = cuts[i + 1];
            if (a == b) continue;
            Poly w = weight ? weight->pieces()[weight->piece_at((a + b) / Rational(2))] : Poly(1);
            Poly part(0);
            for (const auto& c : p.chambers) {
                Poly inner = integrand(c).integrate(v, c.lo, c.hi);
                part += (inner * w).integrate(u, Poly(a), Poly(b));
            }
            part = part.trimmed();
            if (trace && !part.is_zero())
                trace->push_back(label + " on " + u + " in [" + a.str() + "," + b.str() + "]: " + part.str());
            total += part;
        }
    }
    return total.trimmed();
}

}  // namespace

Poly s_w2(const FlagScenario& f, Trace* trace) {
    SurfaceSchedule sched = flag_schedule(f);
    check_window(sched, f.ord_C, "ord_C data");
    const std::string &u = sched.u_var, &v = sched.v_var;
    Poly ord_term(0);
    if (f.ord_C) {
        for (const auto& cls : f.restricted) {
            Poly sq = f.S.square(cls.D.eval_partial({{v, 0}}));
            std::vector<Rational> cuts{cls.ua};
            for (const auto& b : f.ord_C->breaks())
                if (b > cls.ua && b < cls.ub) cuts.push_back(b);
            cuts.push_back(cls.ub);
            for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
                Poly w = f.ord_C->pieces()[f.ord_C->piece_at((cuts[i] + cuts[i + 1]) / Rational(2))];
                Poly part = (sq * w).integrate(u, Poly(cuts[i]), Poly(cuts[i + 1])).trimmed();
                if (trace && !part.is_zero())
                    trace->push_back("ord_C term on " + u + " in [" + cuts[i].str() + "," + cuts[i + 1].str() +
                                     "]: " + part.str());
                ord_term += part;
            }
        }
    }
    Poly vol = integrate_chambers(
        sched, [&](const VPiece& c) { return f.S.square(c.P); }, std::nullopt, trace, "vol term");
    return (ord_term + vol).scaled(Rational(3) / f.V).trimmed();
}

Poly s_w3(const FlagScenario& f, Trace* trace) {
    for (std::size_t i = 0; i < f.point_on.size(); ++i)
        for (std::size_t j = i + 1; j < f.point_on.size(); ++j)
            if (f.point_on[i].curve != f.point_on[j].curve &&
                f.S.pair(f.point_on[i].curve, f.point_on[j].curve).is_zero())
                throw std::invalid_argument("point claimed on disjoint curves " + f.S.basis()[f.point_on[i].curve] +
                                            " and " + f.S.basis()[f.point_on[j].curve]);
    SurfaceSchedule sched = flag_schedule(f);
    check_window(sched, f.ord_P, "ord_P data");
    auto pc = [&](const VPiece& c) { return f.S.pair_eval(c.P, f.C); };
    Poly sq = integrate_chambers(
        sched, [&](const VPiece& c) { return pc(c) * pc(c); }, std::nullopt, trace, "(P.C)^2 term");
    Poly ordN = integrate_chambers(
        sched,
        [&](const VPiece& c) {
            Poly o(0);
            for (const auto& m : f.point_on) o += c.N.coeff(m.curve).scaled(m.mult);
            return pc(c) * o;
        },
        std::nullopt, trace, "ord_P(N(u,v)) term");
    Poly ordP(0);
    if (f.ord_P) ordP = integrate_chambers(sched, pc, f.ord_P, trace, "ord_P(N'(u)) term");
    return (sq.scaled(Rational(3) / f.V) + (ordN + ordP).scaled(Rational(6) / f.V)).trimmed();
}

Rational delta_lower_bound(const std::vector<std::pair<Rational, Rational>>& entries) {
    if (entries.empty()) throw std::invalid_argument("delta_lower_bound: no entries");
    std::optional<Rational> best;
    for (const auto& [A, S] : entries) {
        if (S.sign() <= 0) throw std::domain_error("delta_lower_bound: nonpositive S = " + S.str());
        Rational r = A / S;
        if (!best || r < *best) best = r;
    }
    return *best;
}

}  // namespace kst
