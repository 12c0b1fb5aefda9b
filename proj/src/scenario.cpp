#include "kst/scenario.hpp"

#include "kst/geometry.hpp"
#include "kst/git.hpp"
#include "kst/roots.hpp"
#include "kst/stability.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <thread>

namespace kst {

namespace fs = std::filesystem;

const std::vector<std::string>& scenario_kinds() {
    static const std::vector<std::string> k{"fujita",         "flag2",          "flag3",
                                            "delta",          "git-classify",   "git-table",
                                            "invariants-monomials", "quotient-map", "quadric-rank",
                                            "singular-kernel", "jacobian",      "discriminant",
                                            "schedule-verify", "threshold"};
    return k;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Match: return "match";
        case Verdict::Mismatch: return "mismatch";
        case Verdict::Flagged: return "flagged";
        case Verdict::Computed: return "computed";
    }
    return "?";
}

Verdict verdict_from_string(const std::string& s) {
    for (auto v : {Verdict::Match, Verdict::Mismatch, Verdict::Flagged, Verdict::Computed})
        if (to_string(v) == s) return v;
    throw SchemaError("unknown verdict '" + s + "'");
}

namespace {

// ---- field access ----------------------------------------------------------

const json& req(const json& j, const std::string& key, const std::string& ctx) {
    if (!j.is_object()) throw SchemaError(ctx + ": expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw SchemaError(ctx + ": missing field '" + key + "'");
    return *it;
}

const json* opt(const json& j, const std::string& key) {
    if (!j.is_object()) return nullptr;
    auto it = j.find(key);
    return it == j.end() || it->is_null() ? nullptr : &*it;
}

std::string str_of(const json& j, const std::string& ctx) {
    if (!j.is_string()) throw SchemaError(ctx + ": expected a string");
    return j.get<std::string>();
}

Rational rat(const json& j, const std::string& ctx) {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_string()) {
        try {
            return Rational::parse(j.get<std::string>());
        } catch (const std::exception& e) {
            throw SchemaError(ctx + ": " + e.what());
        }
    }
    throw SchemaError(ctx + ": rationals are written as integers or \"p/q\" strings");
}

Poly poly(const json& j, const std::string& ctx) {
    if (j.is_number_integer()) return Poly(j.get<long>());
    if (!j.is_string()) throw SchemaError(ctx + ": expected a polynomial string");
    try {
        return parse_poly(j.get<std::string>());
    } catch (const std::exception& e) {
        throw SchemaError(ctx + ": " + e.what());
    }
}

std::vector<std::string> names(const json& j, const std::string& ctx) {
    if (!j.is_array()) throw SchemaError(ctx + ": expected an array of names");
    std::vector<std::string> out;
    for (const auto& x : j) out.push_back(str_of(x, ctx));
    return out;
}

std::vector<Rational> rats(const json& j, const std::string& ctx) {
    if (!j.is_array()) throw SchemaError(ctx + ": expected an array");
    std::vector<Rational> out;
    for (const auto& x : j) out.push_back(rat(x, ctx));
    return out;
}

VarValues values(const json& j, const std::string& ctx) {
    if (!j.is_object()) throw SchemaError(ctx + ": expected an object of values");
    VarValues v;
    for (auto it = j.begin(); it != j.end(); ++it) v[it.key()] = rat(it.value(), ctx + "." + it.key());
    return v;
}

DivisorPath divisor(const json& j, const Basis& b, const std::map<std::string, DivisorPath>& named,
                    const std::string& ctx) {
    if (j.is_number_integer() && j.get<long>() == 0) return DivisorPath(b);
    try {
        return parse_divisor(str_of(j, ctx), b, named);
    } catch (const SchemaError&) {
        throw;
    } catch (const std::exception& e) {
        throw SchemaError(ctx + ": " + e.what());
    }
}

// Inline object, or a path relative to the scenario directory.
json resolve(const json& j, const fs::path& dir, const std::string& ctx) {
    if (!j.is_string()) return j;
    fs::path p = dir / j.get<std::string>();
    std::ifstream in(p);
    if (!in) throw SchemaError(ctx + ": cannot open '" + p.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError(ctx + ": " + p.string() + ": " + e.what());
    }
}

std::string join(const std::vector<std::string>& xs, const std::string& sep) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? sep : "") + xs[i];
    return s;
}

std::string vec_str(const std::vector<Rational>& v) {
    std::vector<std::string> s;
    for (const auto& x : v) s.push_back(x.str());
    return "[" + join(s, ":") + "]";
}

// ---- models ----------------------------------------------------------------

struct Model {
    ThreefoldLattice X;
    std::map<std::string, DivisorPath> named;
    DivisorPath D;
    ThreefoldSchedule sched;
    std::vector<CurveFunctional> curves;
    Rational V = 26;
};

Model load_model(const json& src, const fs::path& dir) {
    const std::string ctx = "model";
    json j = resolve(src, dir, ctx);
    Model m;
    Basis b = names(req(j, "basis", ctx), ctx + ".basis");
    m.X = ThreefoldLattice(b);
    for (const auto& t : req(j, "triples", ctx)) {
        if (!t.is_array() || t.size() != 4) throw SchemaError(ctx + ".triples: entries are [a, b, c, value]");
        m.X.set(str_of(t[0], ctx), str_of(t[1], ctx), str_of(t[2], ctx), rat(t[3], ctx + ".triples"));
    }
    if (auto z = opt(j, "zero_pairs"))
        for (const auto& p : *z) {
            auto ab = names(p, ctx + ".zero_pairs");
            if (ab.size() != 2) throw SchemaError(ctx + ".zero_pairs: entries are [a, b]");
            m.X.zero_pair(ab[0], ab[1]);
        }
    if (auto n = opt(j, "named"))
        for (auto it = n->begin(); it != n->end(); ++it)
            m.named[it.key()] = divisor(it.value(), b, m.named, ctx + ".named." + it.key());
    m.sched.var = opt(j, "var") ? str_of(j["var"], ctx + ".var") : "u";
    m.D = divisor(req(j, "D", ctx), b, m.named, ctx + ".D");
    m.sched.breaks = rats(req(j, "breaks", ctx), ctx + ".breaks");
    const auto& N = req(j, "N", ctx);
    if (!N.is_array() || N.size() + 1 != m.sched.breaks.size())
        throw SchemaError(ctx + ".N: need one negative part per interval");
    // Each entry is a class, or a list of [coefficient, effective divisor] terms.
    bool terms = std::any_of(N.begin(), N.end(), [](const json& x) { return x.is_array(); });
    for (std::size_t i = 0; i < N.size(); ++i) {
        std::string c = ctx + ".N[" + std::to_string(i) + "]";
        DivisorPath n(b);
        std::vector<NegativeTerm> ts;
        if (N[i].is_array()) {
            for (const auto& t : N[i]) {
                if (!t.is_array() || t.size() != 2) throw SchemaError(c + ": terms are [coefficient, divisor]");
                std::string nm = str_of(t[1], c);
                ts.push_back({poly(t[0], c), nm, divisor(t[1], b, m.named, c)});
                n += ts.back().cls.scaled(ts.back().coeff);
            }
        } else {
            n = divisor(N[i], b, m.named, c);
            if (terms && !n.is_zero()) throw SchemaError(c + ": mix of term lists and plain classes");
        }
        m.sched.N.push_back(n);
        m.sched.P.push_back(m.D - n);
        if (terms) m.sched.N_terms.push_back(std::move(ts));
    }
    if (auto c = opt(j, "curves"))
        for (const auto& cj : *c) {
            CurveFunctional f{str_of(req(cj, "name", ctx + ".curves"), ctx), b, std::vector<Rational>(b.size())};
            const auto& pr = req(cj, "pairing", ctx + ".curves");
            for (auto it = pr.begin(); it != pr.end(); ++it) f.pairing[m.X.index(it.key())] = rat(it.value(), ctx);
            m.curves.push_back(std::move(f));
        }
    if (auto v = opt(j, "V")) m.V = rat(*v, ctx + ".V");
    return m;
}

SurfaceLattice load_surface(const json& src, const fs::path& dir) {
    const std::string ctx = "surface";
    json j = resolve(src, dir, ctx);
    Basis b = names(req(j, "basis", ctx), ctx + ".basis");
    const auto& g = req(j, "gram", ctx);
    if (!g.is_array() || g.size() != b.size()) throw SchemaError(ctx + ".gram: need one row per basis element");
    RatMatrix G(b.size(), b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
        auto row = rats(g[i], ctx + ".gram");
        if (row.size() != b.size()) throw SchemaError(ctx + ".gram: ragged row");
        for (std::size_t k = 0; k < b.size(); ++k) G(i, k) = row[k];
    }
    return SurfaceLattice(b, G);
}

PiecewisePoly load_piecewise(const json& j, const std::string& var, const std::string& ctx) {
    auto br = rats(req(j, "breaks", ctx), ctx + ".breaks");
    std::vector<Poly> ps;
    for (const auto& p : req(j, "pieces", ctx)) ps.push_back(poly(p, ctx + ".pieces"));
    if (ps.size() + 1 != br.size()) throw SchemaError(ctx + ": need one piece per interval");
    return PiecewisePoly(var, br, ps);
}

struct FlagSetup {
    Model model;
    FlagScenario flag;
};

FlagSetup load_flag(const Scenario& sc, Trace& trace) {
    const json& in = sc.inputs;
    FlagSetup f;
    f.model = load_model(req(in, "model", "inputs"), sc.dir);
    auto rep = verify_schedule(f.model.X, f.model.sched, f.model.D, f.model.curves);
    if (!rep.pass) throw std::domain_error("threefold schedule fails: " + rep.failure);
    auto& fl = f.flag;
    fl.V = opt(in, "V") ? rat(in["V"], "inputs.V") : f.model.V;
    fl.S = load_surface(req(in, "surface", "inputs"), sc.dir);
    fl.pool = NegativeCurvePool::from_names(fl.S, names(req(in, "pool", "inputs"), "inputs.pool"));
    const Basis& sb = fl.S.basis();
    const auto& rj = req(in, "restriction", "inputs");
    RatMatrix img(f.model.X.basis().size(), sb.size());
    for (std::size_t i = 0; i < f.model.X.basis().size(); ++i) {
        const auto& name = f.model.X.basis()[i];
        auto d = divisor(req(rj, name, "inputs.restriction"), sb, {}, "inputs.restriction." + name);
        auto c = d.constant_coeffs();
        for (std::size_t k = 0; k < sb.size(); ++k) img(i, k) = c[k];
    }
    Restriction r(f.model.X.basis(), sb, img);
    fl.C = divisor(req(in, "C", "inputs"), sb, {}, "inputs.C");
    fl.restricted = restrict_schedule(f.model.sched, r, fl.C);
    const std::string& u = f.model.sched.var;
    auto check_ord = [&](const PiecewisePoly& p, const std::string& what) {
        for (std::size_t i = 0; i < p.pieces().size(); ++i) {
            const Poly& q = p.pieces()[i];
            auto used = q.used_vars();
            if (std::any_of(used.begin(), used.end(), [&](const std::string& x) { return x != u; })) continue;
            if (!nonneg_on(q, p.breaks()[i], p.breaks()[i + 1]))
                throw std::domain_error(what + " is negative on [" + p.breaks()[i].str() + ", " +
                                        p.breaks()[i + 1].str() + "]");
        }
    };
    if (auto o = opt(in, "ord_C")) {
        fl.ord_C = load_piecewise(*o, u, "inputs.ord_C");
        check_ord(*fl.ord_C, "ord_C data");
    }
    if (auto o = opt(in, "ord_P")) {
        fl.ord_P = load_piecewise(*o, u, "inputs.ord_P");
        check_ord(*fl.ord_P, "ord_P data");
    }
    if (auto p = opt(in, "point_on"))
        for (const auto& m : *p)
            fl.point_on.push_back({fl.S.index(str_of(req(m, "curve", "inputs.point_on"), "inputs.point_on")),
                                   opt(m, "mult") ? rat(m["mult"], "inputs.point_on.mult") : Rational(1)});
    if (auto d = opt(in, "declared")) {
        SurfaceSchedule s;
        s.u_var = u;
        for (const auto& pj : *d) {
            auto uw = rats(req(pj, "u", "declared"), "declared.u");
            if (uw.size() != 2) throw SchemaError("declared.u: expected [ua, ub]");
            const UClass* own = nullptr;
            for (const auto& c : fl.restricted)
                if (c.ua <= uw[0] && uw[1] <= c.ub) own = &c;
            if (!own) throw SchemaError("declared: u-window [" + uw[0].str() + ", " + uw[1].str() + "] not covered");
            UPiece up{uw[0], uw[1], {}};
            for (const auto& cj : req(pj, "chambers", "declared")) {
                const auto& vw = req(cj, "v", "declared.chambers");
                if (!vw.is_array() || vw.size() != 2) throw SchemaError("declared.chambers.v: expected [lo, hi]");
                VPiece vp;
                vp.lo = poly(vw[0], "declared.v");
                vp.hi = poly(vw[1], "declared.v");
                vp.N = opt(cj, "N") ? divisor(cj["N"], sb, {}, "declared.N") : DivisorPath(sb);
                vp.P = own->D - vp.N;
                for (std::size_t k = 0; k < sb.size(); ++k)
                    if (!vp.N.coeff(k).is_zero()) vp.active.push_back(k);
                vp.ends_by = opt(cj, "ends_by") ? str_of(cj["ends_by"], "declared.ends_by") : "";
                up.chambers.push_back(std::move(vp));
            }
            s.pieces.push_back(std::move(up));
        }
        fl.declared = std::move(s);
    }
    trace.push_back("threefold schedule verified on " + std::to_string(f.model.sched.size()) + " intervals");
    return f;
}

// ---- values ----------------------------------------------------------------

struct Value {
    std::string text;
    std::function<bool(const json&)> equals;
};

Value rational_value(const Rational& r) {
    return {r.str(), [r](const json& e) { return rat(e, "expected") == r; }};
}

Value poly_value(const Poly& p) {
    return {p.str(), [p](const json& e) { return poly(e, "expected") == p; }};
}

Value int_value(long n) {
    return {std::to_string(n), [n](const json& e) {
                if (!e.is_number_integer()) throw SchemaError("expected: integer required");
                return e.get<long>() == n;
            }};
}

std::vector<Rational> projective(std::vector<Rational> v) {
    auto it = std::find_if(v.begin(), v.end(), [](const Rational& x) { return !x.is_zero(); });
    if (it == v.end()) return v;
    Rational s = it->inverse();
    for (auto& x : v) x *= s;
    return v;
}

Value piecewise_value(const PiecewisePoly& p) {
    // Adjacent equal pieces are merged before display and comparison.
    auto merge = [](std::vector<Rational> br, std::vector<Poly> ps) {
        std::vector<Rational> b{br[0]};
        std::vector<Poly> q;
        for (std::size_t i = 0; i < ps.size(); ++i) {
            if (!q.empty() && q.back() == ps[i]) {
                b.back() = br[i + 1];
                continue;
            }
            q.push_back(ps[i]);
            b.push_back(br[i + 1]);
        }
        return std::make_pair(b, q);
    };
    auto [b, q] = merge(p.breaks(), p.pieces());
    std::string text;
    for (std::size_t i = 0; i < q.size(); ++i)
        text += (i ? "; " : "") + q[i].str() + " on [" + b[i].str() + "," + b[i + 1].str() + "]";
    return {text, [b = b, q = q, merge](const json& e) {
                auto eb = rats(req(e, "breaks", "expected"), "expected.breaks");
                std::vector<Poly> ep;
                for (const auto& x : req(e, "pieces", "expected")) ep.push_back(poly(x, "expected.pieces"));
                if (ep.size() + 1 != eb.size()) throw SchemaError("expected: need one piece per interval");
                auto [mb, mq] = merge(eb, ep);
                return mb == b && mq == q;
            }};
}

// ---- kinds -----------------------------------------------------------------

using Handler = std::function<Value(const Scenario&, Trace&)>;

Value run_fujita(const Scenario& sc, Trace& tr) {
    Model m = load_model(req(sc.inputs, "model", "inputs"), sc.dir);
    FujitaScenario f{m.X, m.D, m.sched, m.curves, opt(sc.inputs, "A") ? rat(sc.inputs["A"], "inputs.A") : 1, m.V};
    std::string out = opt(sc.inputs, "output") ? str_of(sc.inputs["output"], "inputs.output") : "beta";
    if (out == "S") return rational_value(s_invariant(f, &tr));
    if (out == "beta") {
        Rational b = beta(f, &tr);
        tr.push_back("A = " + f.A.str());
        return rational_value(b);
    }
    throw SchemaError("inputs.output: expected \"S\" or \"beta\"");
}

Value run_schedule_verify(const Scenario& sc, Trace& tr) {
    Model m = load_model(req(sc.inputs, "model", "inputs"), sc.dir);
    auto rep = verify_schedule(m.X, m.sched, m.D, m.curves);
    for (const auto& n : rep.notes) tr.push_back(n);
    std::vector<Poly> cubes;
    std::vector<std::string> cs;
    for (std::size_t i = 0; i < m.sched.size(); ++i) {
        cubes.push_back(m.X.cube(m.sched.P[i]));
        cs.push_back(cubes.back().str());
        tr.push_back("P^3 on [" + m.sched.breaks[i].str() + "," + m.sched.breaks[i + 1].str() + "] = " + cs.back());
    }
    bool pass = rep.pass;
    std::string text = std::string(pass ? "pass" : "fail: " + rep.failure) + "; " + join(cs, " | ");
    return {text, [pass, cubes](const json& e) {
                if (req(e, "pass", "expected").get<bool>() != pass) return false;
                if (auto ig = opt(e, "integrands")) {
                    if (!ig->is_array() || ig->size() != cubes.size()) return false;
                    for (std::size_t i = 0; i < cubes.size(); ++i)
                        if (poly((*ig)[i], "expected.integrands") != cubes[i]) return false;
                }
                return true;
            }};
}

// The declared schedule, when present, must coincide with the oracle's.
void cross_check(const FlagSetup& f, Trace& tr) {
    if (!f.flag.declared) return;
    auto oracle = parametric_zariski(f.flag.S, f.flag.restricted, f.flag.pool);
    std::string why;
    if (!same_schedule(*f.flag.declared, oracle, &why))
        throw std::domain_error("oracle schedule differs from the declared one: " + why);
    tr.push_back("declared surface schedule verified and reproduced by the oracle (" +
                 std::to_string(oracle.normalized().pieces.size()) + " u-pieces)");
}

void trace_schedule(const SurfaceLattice& S, const SurfaceSchedule& sched, Trace& tr) {
    for (const auto& p : sched.normalized().pieces)
        for (const auto& c : p.chambers)
            tr.push_back(sched.u_var + " in [" + p.ua.str() + "," + p.ub.str() + "], " + sched.v_var + " in [" +
                         c.lo.str() + ", " + c.hi.str() + "]: N = " + c.N.str() + ", P^2 = " + S.square(c.P).str());
}

Value run_flag(const Scenario& sc, Trace& tr, bool level3) {
    FlagSetup f = load_flag(sc, tr);
    cross_check(f, tr);
    auto sched = flag_schedule(f.flag);
    tr.push_back("t(u) = " + sched.normalized().threshold().str());
    trace_schedule(f.flag.S, sched, tr);
    return poly_value(level3 ? s_w3(f.flag, &tr) : s_w2(f.flag, &tr));
}

Value run_threshold(const Scenario& sc, Trace& tr) {
    FlagSetup f = load_flag(sc, tr);
    cross_check(f, tr);
    trace_schedule(f.flag.S, flag_schedule(f.flag), tr);
    tr.push_back("threshold certified relative to the declared curve pool (" + std::to_string(f.flag.pool.candidates.size()) +
                 " curves), not the full cone");
    return piecewise_value(pseff_threshold(f.flag.S, f.flag.restricted, f.flag.pool));
}

Value run_delta(const Scenario& sc, Trace& tr) {
    std::vector<std::pair<Rational, Rational>> e;
    for (const auto& x : req(sc.inputs, "entries", "inputs")) {
        e.push_back({rat(req(x, "A", "entries"), "entries.A"), rat(req(x, "S", "entries"), "entries.S")});
        tr.push_back((opt(x, "label") ? str_of(x["label"], "entries.label") + ": " : std::string()) + "A/S = " +
                     (e.back().first / e.back().second).str());
    }
    return rational_value(delta_lower_bound(e));
}

TorusAction load_action(const json& j) {
    TorusAction a;
    a.coords = names(req(j, "coords", "action"), "action.coords");
    for (const auto& w : req(j, "weights", "action")) {
        if (!w.is_array()) throw SchemaError("action.weights: expected integer vectors");
        std::vector<long> v;
        for (const auto& x : w) {
            if (!x.is_number_integer()) throw SchemaError("action.weights: expected integers");
            v.push_back(x.get<long>());
        }
        a.weights.push_back(v);
    }
    try {
        a.validate();
    } catch (const std::invalid_argument& e) {
        throw SchemaError(e.what());
    }
    return a;
}

Support load_support(const TorusAction& a, const json& j) {
    Support s;
    for (const auto& n : names(j, "support")) s.push_back(a.index(n));
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

Value run_git_classify(const Scenario& sc, Trace&) {
    auto a = load_action(req(sc.inputs, "action", "inputs"));
    auto c = classify(a, load_support(a, req(sc.inputs, "support", "inputs")));
    return {to_string(c), [c](const json& e) { return stability_from_string(str_of(e, "expected")) == c; }};
}

Value run_git_table(const Scenario& sc, Trace& tr) {
    auto a = load_action(req(sc.inputs, "action", "inputs"));
    std::map<Support, std::string> notes;
    if (auto an = opt(sc.inputs, "annotate"))
        for (const auto& x : *an) notes[load_support(a, req(x, "support", "annotate"))] = str_of(req(x, "note", "annotate"), "note");
    auto t = enumerate_classification(a, notes);
    for (const auto& r : t.rows)
        tr.push_back(support_name(a, r.support) + " " + to_string(r.cls) + (r.note.empty() ? "" : "  (" + r.note + ")"));
    std::vector<std::string> cs;
    for (auto c : {StabilityClass::Unstable, StabilityClass::Stable, StabilityClass::PolystableNotStable,
                   StabilityClass::SemistableNotPolystable})
        cs.push_back(to_string(c) + " " + std::to_string(t.counts[c]));
    return {join(cs, ", "), [a, t](const json& e) {
                if (auto c = opt(e, "counts"))
                    for (auto it = c->begin(); it != c->end(); ++it) {
                        auto k = stability_from_string(it.key());
                        auto have = t.counts.count(k) ? t.counts.at(k) : 0;
                        if (have != it.value().get<std::size_t>()) return false;
                    }
                auto contains = [](const Support& s, std::size_t i) { return std::binary_search(s.begin(), s.end(), i); };
                if (auto z = opt(e, "unstable_iff_zero_on_one_of")) {
                    std::vector<Support> zs;
                    for (const auto& x : *z) zs.push_back(load_support(a, x));
                    for (const auto& r : t.rows) {
                        bool pred = std::any_of(zs.begin(), zs.end(), [&](const Support& zz) {
                            return std::none_of(zz.begin(), zz.end(), [&](std::size_t i) { return contains(r.support, i); });
                        });
                        if (pred != (r.cls == StabilityClass::Unstable)) return false;
                    }
                }
                if (auto s = opt(e, "stable_iff_nonzero")) {
                    auto need = load_support(a, *s);
                    for (const auto& r : t.rows) {
                        bool pred = std::all_of(need.begin(), need.end(), [&](std::size_t i) { return contains(r.support, i); });
                        if (pred != (r.cls == StabilityClass::Stable)) return false;
                    }
                }
                if (auto s = opt(e, "stable_iff_not_unstable"); s && s->get<bool>())
                    for (const auto& r : t.rows)
                        if ((r.cls == StabilityClass::Stable) == (r.cls == StabilityClass::Unstable)) return false;
                if (auto rows = opt(e, "rows"))
                    for (const auto& x : *rows) {
                        auto sup = load_support(a, req(x, "support", "expected.rows"));
                        auto want = stability_from_string(str_of(req(x, "class", "expected.rows"), "class"));
                        auto it = std::find_if(t.rows.begin(), t.rows.end(), [&](const ClassRow& r) { return r.support == sup; });
                        if (it == t.rows.end() || it->cls != want) return false;
                    }
                return true;
            }};
}

Value run_invariants(const Scenario& sc, Trace& tr) {
    auto a = load_action(req(sc.inputs, "action", "inputs"));
    int hi = req(sc.inputs, "max_degree", "inputs").get<int>();
    int lo = opt(sc.inputs, "min_degree") ? sc.inputs["min_degree"].get<int>() : 1;
    if (hi < 1) throw SchemaError("inputs.max_degree: must be at least 1");
    std::vector<Poly> mons;
    for (const auto& e : invariant_monomials(a, hi, lo)) {
        mons.push_back(Poly::monomial(a.coords, e, 1).trimmed());
        tr.push_back(mons.back().str());
    }
    return {std::to_string(mons.size()) + " monomials",
            [mons](const json& e) {
                if (auto c = opt(e, "count"); c && c->get<std::size_t>() != mons.size()) return false;
                if (auto m = opt(e, "monomials")) {
                    if (m->size() != mons.size()) return false;
                    for (const auto& x : *m) {
                        Poly p = poly(x, "expected.monomials");
                        if (std::find(mons.begin(), mons.end(), p) == mons.end()) return false;
                    }
                }
                return true;
            }};
}

Value run_quotient(const Scenario& sc, Trace& tr) {
    std::vector<Poly> map;
    for (const auto& x : req(sc.inputs, "map", "inputs")) map.push_back(poly(x, "inputs.map"));
    auto pt = values(req(sc.inputs, "point", "inputs"), "inputs.point");
    auto q = quotient_coords(map, pt);
    std::vector<std::string> ms;
    for (const auto& p : map) ms.push_back(p.str());
    tr.push_back("map [" + join(ms, " : ") + "]");
    return {vec_str(q), [q](const json& e) { return projective(rats(e, "expected")) == q; }};
}

QuadraticForm load_form(const json& in) {
    return QuadraticForm::from_poly(poly(req(in, "quadric", "inputs"), "inputs.quadric"),
                                    names(req(in, "vars", "inputs"), "inputs.vars"));
}

Value run_quadric_rank(const Scenario& sc, Trace& tr) {
    auto q = load_form(sc.inputs);
    auto p = values(req(sc.inputs, "params", "inputs"), "inputs.params");
    tr.push_back("det = " + det(q.at(p)).str());
    return int_value(static_cast<long>(quadric_rank_at(q, p)));
}

Value run_singular_kernel(const Scenario& sc, Trace& tr) {
    auto q = load_form(sc.inputs);
    auto p = values(req(sc.inputs, "params", "inputs"), "inputs.params");
    auto s = singular_kernel(q, p);
    RatMatrix M = q.at(p);
    for (const auto& k : s.kernel) tr.push_back("kernel vector " + vec_str(k));
    std::string text = "dim " + std::to_string(s.kernel.size()) + (s.point.empty() ? "" : ", point " + vec_str(s.point));
    return {text, [s, M](const json& e) {
                if (req(e, "dimension", "expected").get<std::size_t>() != s.kernel.size()) return false;
                if (auto pt = opt(e, "point"); pt && projective(rats(*pt, "expected.point")) != s.point) return false;
                if (auto c = opt(e, "contains"))
                    for (const auto& v : *c) {
                        auto x = rats(v, "expected.contains");
                        if (x.size() != M.cols()) return false;
                        for (std::size_t i = 0; i < M.rows(); ++i) {
                            Rational acc(0);
                            for (std::size_t k = 0; k < M.cols(); ++k) acc += M(i, k) * x[k];
                            if (!acc.is_zero()) return false;
                        }
                    }
                return true;
            }};
}

Value run_jacobian(const Scenario& sc, Trace& tr) {
    const json& in = sc.inputs;
    VarValues params = opt(in, "params") ? values(in["params"], "inputs.params") : VarValues{};
    PolySystem sys;
    for (const auto& e : req(in, "equations", "inputs"))
        sys.equations.push_back(poly(e, "inputs.equations").eval_partial(params));
    for (const auto& f : req(in, "factors", "inputs")) sys.factors.push_back(names(f, "inputs.factors"));
    ProjPoint pt;
    for (const auto& f : req(in, "point", "inputs")) pt.push_back(rats(f, "inputs.point"));
    std::vector<std::string> ps;
    for (const auto& f : pt) ps.push_back(vec_str(f));
    tr.push_back("point (" + join(ps, ", ") + ")");
    return int_value(static_cast<long>(jacobian_rank_at(sys, pt)));
}

Value run_discriminant(const Scenario& sc, Trace& tr) {
    const json& in = sc.inputs;
    Poly d;
    if (auto f = opt(in, "fiber")) {
        std::map<std::string, Poly> sub;
        const auto& sj = req(*f, "substitution", "inputs.fiber");
        for (auto it = sj.begin(); it != sj.end(); ++it) sub[it.key()] = poly(it.value(), "inputs.fiber.substitution");
        auto form = conic_fiber_form(poly(req(*f, "quadric", "inputs.fiber"), "inputs.fiber.quadric"), sub,
                                     names(req(*f, "fiber_vars", "inputs.fiber"), "inputs.fiber.fiber_vars"));
        tr.push_back("fibre form " + form.M.str());
        d = discriminant(form);
    } else if (auto f = opt(in, "form")) {
        d = discriminant(load_form(*f));
    } else if (auto p = opt(in, "poly")) {
        d = poly(*p, "inputs.poly");
    } else {
        throw SchemaError("inputs: need one of 'fiber', 'form', 'poly'");
    }
    if (auto p = opt(in, "params")) d = d.eval_partial(values(*p, "inputs.params")).trimmed();
    std::string bad;
    if (auto z = opt(in, "vanishes_at"))
        for (const auto& x : *z) {
            Rational v = d.evaluate(values(x, "inputs.vanishes_at"));
            tr.push_back("value at " + x.dump() + " = " + v.str());
            if (!v.is_zero() && bad.empty()) bad = x.dump();
        }
    if (auto z = opt(in, "nonzero_at"))
        for (const auto& x : *z) {
            Rational v = d.evaluate(values(x, "inputs.nonzero_at"));
            tr.push_back("value at " + x.dump() + " = " + v.str());
            if (v.is_zero() && bad.empty()) bad = x.dump();
        }
    if (!bad.empty()) throw std::domain_error("vanishing pattern violated at " + bad);
    return {d.str(), [d, &tr](const json& e) {
                Rational c;
                bool ok = proportional(d, poly(e, "expected"), &c);
                if (ok) tr.push_back("computed = " + c.str() + " * expected");
                return ok;
            }};
}

const std::map<std::string, Handler>& handlers() {
    static const std::map<std::string, Handler> h{
        {"fujita", run_fujita},
        {"schedule-verify", run_schedule_verify},
        {"flag2", [](const Scenario& s, Trace& t) { return run_flag(s, t, false); }},
        {"flag3", [](const Scenario& s, Trace& t) { return run_flag(s, t, true); }},
        {"threshold", run_threshold},
        {"delta", run_delta},
        {"git-classify", run_git_classify},
        {"git-table", run_git_table},
        {"invariants-monomials", run_invariants},
        {"quotient-map", run_quotient},
        {"quadric-rank", run_quadric_rank},
        {"singular-kernel", run_singular_kernel},
        {"jacobian", run_jacobian},
        {"discriminant", run_discriminant},
    };
    return h;
}

}  // namespace

Scenario parse_scenario(const json& j, const fs::path& dir) {
    if (!j.is_object()) throw SchemaError("scenario: expected a JSON object");
    const auto& v = req(j, "schema", "scenario");
    if (!v.is_number_integer() || v.get<int>() != kSchemaVersion)
        throw SchemaError("scenario: unsupported schema version " + v.dump());
    Scenario s;
    s.id = str_of(req(j, "id", "scenario"), "scenario.id");
    const std::string ctx = "scenario '" + s.id + "'";
    s.kind = str_of(req(j, "kind", ctx), ctx + ".kind");
    const auto& kinds = scenario_kinds();
    if (std::find(kinds.begin(), kinds.end(), s.kind) == kinds.end())
        throw SchemaError(ctx + ": unknown kind '" + s.kind + "'");
    s.provenance = str_of(req(j, "provenance", ctx), ctx + ".provenance");
    s.inputs = req(j, "inputs", ctx);
    if (auto e = opt(j, "expected")) s.expected = *e;
    if (auto f = opt(j, "flag")) {
        s.flag = FlaggedReading{str_of(req(*f, "reason", ctx + ".flag"), "reason"),
                                req(*f, "paper_reading", ctx + ".flag"), req(*f, "alt_reading", ctx + ".flag")};
        if (s.expected) throw SchemaError(ctx + ": a flagged scenario records readings, not 'expected'");
    }
    s.dir = dir;
    return s;
}

Scenario load_scenario(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw SchemaError("cannot open '" + file.string() + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError(file.filename().string() + ": " + e.what());
    }
    auto s = parse_scenario(j, file.parent_path());
    s.source = file.filename().string();
    return s;
}

ScenarioResult run_scenario(const Scenario& sc) {
    ScenarioResult r{sc.id, sc.kind, sc.provenance, sc.source, "", "", Verdict::Mismatch, "", {}};
    if (sc.expected) r.expected = sc.expected->is_string() ? sc.expected->get<std::string>() : sc.expected->dump();
    if (sc.flag)
        r.expected = "paper: " + sc.flag->paper_reading.dump() + " / alt: " + sc.flag->alt_reading.dump();
    Value v;
    try {
        v = handlers().at(sc.kind)(sc, r.trace);
    } catch (const SchemaError&) {
        throw;
    } catch (const std::exception& e) {
        r.computed = "error";
        r.note = e.what();
        return r;
    }
    r.computed = v.text;
    if (sc.flag) {
        bool paper = v.equals(sc.flag->paper_reading), alt = v.equals(sc.flag->alt_reading);
        if (paper || alt) {
            r.verdict = Verdict::Flagged;
            r.note = sc.flag->reason + " [computation reproduces the " +
                     std::string(paper && alt ? "both readings" : paper ? "stated reading" : "alternative reading") + "]";
        } else {
            r.note = "computation matches neither recorded reading";
        }
    } else if (sc.expected) {
        r.verdict = v.equals(*sc.expected) ? Verdict::Match : Verdict::Mismatch;
    } else {
        r.verdict = Verdict::Computed;
    }
    return r;
}

std::map<Verdict, std::size_t> Report::counts() const {
    std::map<Verdict, std::size_t> c;
    for (auto v : {Verdict::Match, Verdict::Mismatch, Verdict::Flagged, Verdict::Computed}) c[v] = 0;
    for (const auto& r : results) ++c[r.verdict];
    return c;
}

bool Report::ok() const {
    return std::none_of(results.begin(), results.end(), [](const ScenarioResult& r) { return r.verdict == Verdict::Mismatch; });
}

Report verify_all(const fs::path& dir, unsigned threads) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());

    std::vector<ScenarioResult> out(files.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next++) < files.size();) {
            try {
                out[i] = run_scenario(load_scenario(files[i]));
            } catch (const std::exception& e) {
                out[i] = ScenarioResult{files[i].stem().string(), "?", "", files[i].filename().string(),
                                        "error", "", Verdict::Mismatch, std::string("schema: ") + e.what(), {}};
            }
        }
    };
    threads = std::max(1u, threads);
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    Report rep;
    rep.results = std::move(out);
    std::stable_sort(rep.results.begin(), rep.results.end(),
                     [](const ScenarioResult& a, const ScenarioResult& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < rep.results.size(); ++i)
        if (rep.results[i].id == rep.results[i - 1].id)
            for (auto* r : {&rep.results[i - 1], &rep.results[i]}) {
                r->verdict = Verdict::Mismatch;
                r->note = "duplicate id";
            }
    return rep;
}

std::string render_table(const Report& r, bool with_trace) {
    std::size_t wid = 2, wkind = 4, wv = 7, wc = 8;
    for (const auto& x : r.results) {
        wid = std::max(wid, x.id.size());
        wkind = std::max(wkind, x.kind.size());
        wc = std::max(wc, std::min<std::size_t>(x.computed.size(), 48));
    }
    auto pad = [](std::string s, std::size_t w) {
        if (s.size() > w) s = s.substr(0, w - 3) + "...";
        return s + std::string(w - s.size() + 2, ' ');
    };
    std::ostringstream os;
    os << pad("id", wid) << pad("kind", wkind) << pad("verdict", wv) << pad("computed", wc) << "expected\n";
    os << std::string(wid + wkind + wv + wc + 16, '-') << "\n";
    for (const auto& x : r.results) {
        os << pad(x.id, wid) << pad(x.kind, wkind) << pad(to_string(x.verdict), wv) << pad(x.computed, wc)
           << x.expected << "\n";
        if (!x.provenance.empty()) os << std::string(wid + 2, ' ') << "source: " << x.provenance << "\n";
        if (!x.note.empty()) os << std::string(wid + 2, ' ') << "note: " << x.note << "\n";
        if (with_trace)
            for (const auto& t : x.trace) os << std::string(wid + 4, ' ') << t << "\n";
    }
    auto c = r.counts();
    os << "\n" << r.results.size() << " scenarios: " << c[Verdict::Match] << " match, " << c[Verdict::Mismatch]
       << " mismatch, " << c[Verdict::Flagged] << " flagged, " << c[Verdict::Computed] << " computed\n";
    return os.str();
}

json to_json(const Report& r) {
    json j;
    j["schema"] = kSchemaVersion;
    j["results"] = json::array();
    for (const auto& x : r.results)
        j["results"].push_back({{"id", x.id},
                                {"kind", x.kind},
                                {"provenance", x.provenance},
                                {"source", x.source},
                                {"computed", x.computed},
                                {"expected", x.expected},
                                {"verdict", to_string(x.verdict)},
                                {"note", x.note},
                                {"trace", x.trace}});
    json s;
    for (const auto& [v, n] : r.counts()) s[to_string(v)] = n;
    s["total"] = r.results.size();
    j["summary"] = s;
    return j;
}

Report report_from_json(const json& j) {
    if (!j.is_object() || !j.contains("results")) throw SchemaError("report: missing field 'results'");
    Report r;
    for (const auto& x : j["results"]) {
        ScenarioResult s;
        s.id = str_of(req(x, "id", "report"), "id");
        s.kind = str_of(req(x, "kind", "report"), "kind");
        s.provenance = x.value("provenance", "");
        s.source = x.value("source", "");
        s.computed = x.value("computed", "");
        s.expected = x.value("expected", "");
        s.verdict = verdict_from_string(str_of(req(x, "verdict", "report"), "verdict"));
        s.note = x.value("note", "");
        s.trace = x.value("trace", std::vector<std::string>{});
        r.results.push_back(std::move(s));
    }
    std::stable_sort(r.results.begin(), r.results.end(),
                     [](const ScenarioResult& a, const ScenarioResult& b) { return a.id < b.id; });
    return r;
}

}  // namespace kst
