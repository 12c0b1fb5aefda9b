#include "properties.hpp"

#include "kst/git.hpp"
#include "kst/piecewise.hpp"
#include "kst/scenario.hpp"
#include "kst/zariski.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>

namespace kst::props {

namespace {

using Rng = std::mt19937_64;

long pick(Rng& g, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(g); }

Rational rand_rational(Rng& g, long span = 40) {
    long den = pick(g, 1, span);
    return Rational(pick(g, -span, span), den);
}

Rational rand_nonzero(Rng& g) {
    for (;;)
        if (auto r = rand_rational(g); !r.is_zero()) return r;
}

Poly rand_poly(Rng& g, const std::string& var, int max_deg) {
    Poly p(0), x = Poly::var(var);
    for (int d = pick(g, 0, max_deg); d >= 0; --d) p = p * x + Poly(rand_rational(g, 9));
    return p;
}

// Runs `body` n times; body returns an empty string on success.
PropertyResult run(const std::string& name, std::size_t n, const std::function<std::string(std::size_t)>& body) {
    PropertyResult r{name};
    for (std::size_t i = 0; i < n; ++i) {
        ++r.cases;
        std::string why;
        try {
            why = body(i);
        } catch (const std::exception& e) {
            why = std::string("exception: ") + e.what();
        }
        if (!why.empty()) {
            if (r.failures++ == 0) r.first_failure = "case " + std::to_string(i) + ": " + why;
        }
    }
    return r;
}

}  // namespace

PropertyResult rational_field(std::uint64_t seed, std::size_t n) {
    Rng g(seed);
    return run("rational field axioms", n, [&](std::size_t) -> std::string {
        Rational a = rand_rational(g), b = rand_rational(g), c = rand_rational(g);
        if (a + b != b + a || a * b != b * a) return "commutativity";
        if ((a + b) + c != a + (b + c) || (a * b) * c != a * (b * c)) return "associativity";
        if (a * (b + c) != a * b + a * c) return "distributivity";
        if (a + Rational(0) != a || a * Rational(1) != a || a + (-a) != Rational(0)) return "identities";
        if (!a.is_zero() && a * a.inverse() != Rational(1)) return "inverse";
        if (!b.is_zero() && (a / b) * b != a) return "division";
        if (Rational::parse(a.str()) != a) return "round trip " + a.str();
        if (a.den() <= 0 || gcd(a.num(), a.den()) != 1) return "not in lowest terms";
        if ((a < b) + (b < a) + (a == b) != 1) return "trichotomy";
        return "";
    });
}

PropertyResult integral_additivity(std::uint64_t seed, std::size_t n) {
    Rng g(seed);
    return run("integral additivity", n, [&](std::size_t) -> std::string {
        std::vector<Rational> br{rand_rational(g, 6)};
        std::size_t pieces = pick(g, 1, 4);
        for (std::size_t i = 0; i < pieces; ++i) br.push_back(br.back() + Rational(pick(g, 1, 12), pick(g, 1, 6)));
        std::vector<Poly> ps;
        for (std::size_t i = 0; i < pieces; ++i) ps.push_back(rand_poly(g, "u", 4));
        PiecewisePoly f("u", br, ps);
        std::vector<Rational> cut;
        for (int i = 0; i < 3; ++i) {
            Rational t = Rational(pick(g, 0, 1000), 1000);
            cut.push_back(f.lo() + (f.hi() - f.lo()) * t);
        }
        std::sort(cut.begin(), cut.end());
        const Rational &a = cut[0], &b = cut[1], &c = cut[2];
        if (f.integrate_value(a, c) != f.integrate_value(a, b) + f.integrate_value(b, c)) return "split at b";
        if (f.integrate_value(a, a) != Rational(0)) return "empty interval";
        Rational whole(0);
        for (std::size_t i = 0; i < pieces; ++i) whole += f.integrate_value(br[i], br[i + 1]);
        if (whole != f.integrate_value(f.lo(), f.hi())) return "sum over pieces";
        // Linearity in the integrand.
        Rational k = rand_rational(g, 7);
        auto kf = f.map([&](const Poly& p, std::size_t) { return p.scaled(k); });
        if (kf.integrate_value(a, c) != k * f.integrate_value(a, c)) return "scaling";
        return "";
    });
}

PropertyResult intersection_forms(std::uint64_t seed, std::size_t n) {
    Rng g(seed);
    return run("intersection forms: multilinear and symmetric", n, [&](std::size_t) -> std::string {
        std::size_t dim = pick(g, 1, 5);
        Basis b;
        for (std::size_t i = 0; i < dim; ++i) b.push_back("D" + std::to_string(i));
        ThreefoldLattice X(b);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = i; j < dim; ++j)
                for (std::size_t k = j; k < dim; ++k)
                    if (pick(g, 0, 2)) X.set(b[i], b[j], b[k], rand_rational(g, 6));
        RatMatrix G(dim, dim);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = i; j < dim; ++j) G(i, j) = G(j, i) = rand_rational(g, 6);
        SurfaceLattice S(b, G);
        auto rand_div = [&] {
            std::vector<Poly> c;
            for (std::size_t i = 0; i < dim; ++i) c.push_back(Poly(rand_rational(g, 8)));
            return DivisorPath(b, c);
        };
        auto x = rand_div(), y = rand_div(), z = rand_div(), w = rand_div();
        Rational s = rand_rational(g, 8);
        auto T = [&](const DivisorPath& p, const DivisorPath& q, const DivisorPath& r) { return X.triple_eval(p, q, r); };
        Poly xyz = T(x, y, z);
        for (auto v : {T(x, z, y), T(y, x, z), T(y, z, x), T(z, x, y), T(z, y, x)})
            if (v != xyz) return "triple product not symmetric";
        if (T(x + w.scaled(Poly(s)), y, z) != xyz + T(w, y, z).scaled(s)) return "triple product not linear";
        if (X.cube(x.scaled(Poly(s))) != X.cube(x).scaled(s * s * s)) return "cube not homogeneous";
        if (S.pair_eval(x, y) != S.pair_eval(y, x)) return "surface pairing not symmetric";
        if (S.pair_eval(x + w.scaled(Poly(s)), y) != S.pair_eval(x, y) + S.pair_eval(w, y).scaled(s))
            return "surface pairing not linear";
        return "";
    });
}

PropertyResult zariski_postconditions(std::uint64_t seed, std::size_t n) {
    Rng g(seed);
    const std::vector<SurfaceLattice> surfaces{
        SurfaceLattice({"Z", "e1", "e2"}, RatMatrix{{0, 1, 1}, {1, -1, 0}, {1, 0, -1}}),
        SurfaceLattice({"Z", "e"}, RatMatrix{{0, 2}, {2, -2}}),
        SurfaceLattice({"f", "a", "b", "c"}, RatMatrix{{0, 1, 1, 1}, {1, -2, 1, 0}, {1, 1, -2, 0}, {1, 0, 0, -1}}),
    };
    return run("Zariski decomposition post-conditions", n, [&](std::size_t i) -> std::string {
        const auto& S = surfaces[i % surfaces.size()];
        const auto& b = S.basis();
        std::vector<std::string> pool_names(b.begin() + 1, b.end());
        auto pool = NegativeCurvePool::from_names(S, pool_names);
        // Effective classes: the first basis element is nef, the rest are negative curves.
        std::vector<Poly> c;
        for (std::size_t k = 0; k < b.size(); ++k) c.push_back(Poly(Rational(pick(g, 0, 30), pick(g, 1, 6))));
        DivisorPath D(b, c);
        auto d = zariski_decompose(S, D, pool);
        if (d.P + d.N != D) return "P + N != D";
        for (std::size_t k = 0; k < b.size(); ++k) {
            Rational nk = d.N.coeff(k).constant_value();
            if (nk < 0) return "negative coefficient in N";
            if (k == 0 && !nk.is_zero()) return "N uses a curve outside the pool";
            Rational pk = S.pair_with(d.P, k).constant_value();
            if (pk < 0) return "P is not nef on " + b[k];
            bool active = std::binary_search(d.active.begin(), d.active.end(), k);
            if (active && !pk.is_zero()) return "P not orthogonal to active " + b[k];
            if (!nk.is_zero() && !active) return "support of N outside the active set";
        }
        if (!negative_definite(S, d.active)) return "active set not negative definite";
        auto again = zariski_decompose(S, d.P, pool);
        if (again.P != d.P || !again.N.is_zero()) return "not idempotent";
        // Scaling commutes with the decomposition.
        Rational t(pick(g, 1, 9), pick(g, 1, 9));
        auto ds = zariski_decompose(S, D.scaled(Poly(t)), pool);
        if (ds.P != d.P.scaled(Poly(t))) return "not homogeneous";
        return "";
    });
}

PropertyResult git_partition(std::uint64_t seed, std::size_t n) {
    Rng g(seed);
    const std::vector<Poly> qmap{parse_poly("alpha^2"), parse_poly("beta epsilon"), parse_poly("gamma delta")};
    return run("GIT partition and invariance", n, [&](std::size_t i) -> std::string {
        std::size_t m = pick(g, 1, 7), rank = pick(g, 1, 2);
        TorusAction a;
        for (std::size_t k = 0; k < m; ++k) {
            a.coords.push_back("x" + std::to_string(k));
            std::vector<long> w;
            for (std::size_t j = 0; j < rank; ++j) w.push_back(pick(g, -3, 3));
            a.weights.push_back(w);
        }
        Support s;
        for (std::size_t k = 0; k < m; ++k)
            if (pick(g, 0, 1)) s.push_back(k);
        if (s.empty()) s.push_back(pick(g, 0, m - 1));
        auto c = classify(a, s);

        // Negating every weight inverts the torus.
        TorusAction neg = a;
        for (auto& w : neg.weights)
            for (auto& x : w) x = -x;
        if (classify(neg, s) != c) return "negation changes the class";

        // Permuting coordinates, with the support carried along.
        std::vector<std::size_t> perm(m);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), g);
        TorusAction pa = a;
        for (std::size_t k = 0; k < m; ++k) pa.weights[perm[k]] = a.weights[k];
        Support ps;
        for (auto k : s) ps.push_back(perm[k]);
        std::sort(ps.begin(), ps.end());
        if (classify(pa, ps) != c) return "permutation changes the class";

        // Enlarging a stable support keeps it stable; an unstable support stays unstable when shrunk.
        Support big = s;
        for (std::size_t k = 0; k < m; ++k)
            if (!std::binary_search(s.begin(), s.end(), k) && pick(g, 0, 1)) big.push_back(k);
        std::sort(big.begin(), big.end());
        auto cb = classify(a, big);
        if (c == StabilityClass::Stable && cb != StabilityClass::Stable) return "stable support lost stability";
        if (cb == StabilityClass::Unstable && c != StabilityClass::Unstable) return "unstable superset of semistable";

        // The class table partitions all supports.
        if (i % 16 == 0) {
            auto t = enumerate_classification(a);
            std::size_t total = 0;
            for (const auto& [k, v] : t.counts) total += v;
            if (total != (1UL << m) - 1 || t.rows.size() != total) return "table does not partition the supports";
        }

        // The first quotient map is constant on torus orbits.
        VarValues p;
        for (const char* v : {"alpha", "beta", "gamma", "delta", "epsilon"}) p[v] = rand_rational(g, 9);
        p["alpha"] = rand_nonzero(g);
        Rational l = rand_nonzero(g), mu = rand_nonzero(g);
        VarValues q = p;
        q["beta"] *= l * mu;
        q["gamma"] *= l / mu;
        q["delta"] *= mu / l;
        q["epsilon"] *= (l * mu).inverse();
        if (quotient_coords(qmap, p) != quotient_coords(qmap, q)) return "quotient map not orbit-constant";
        return "";
    });
}

PropertyResult report_determinism(std::uint64_t seed, std::size_t n, const std::filesystem::path& scratch) {
    namespace fs = std::filesystem;
    Rng g(seed);
    fs::path dir = scratch / ("determinism-" + std::to_string(seed));
    std::string baseline_table, baseline_json;
    const std::size_t per_suite = 50;
    auto make_suite = [&] {
        fs::remove_all(dir);
        fs::create_directories(dir);
        std::size_t count = pick(g, 5, 25);
        for (std::size_t i = 0; i < count; ++i) {
            json j{{"schema", kSchemaVersion}, {"id", "rnd." + std::to_string(pick(g, 0, 9999)) + "." + std::to_string(i)}};
            j["provenance"] = "randomized";
            switch (pick(g, 0, 3)) {
                case 0: {
                    json w = json::array();
                    for (int k = 0; k < 5; ++k) w.push_back({pick(g, -2, 2), pick(g, -2, 2)});
                    j["kind"] = "git-classify";
                    j["inputs"] = {{"action", {{"coords", {"a", "b", "c", "d", "e"}}, {"weights", w}}},
                                   {"support", {"a", "c", "e"}}};
                    if (pick(g, 0, 1)) j["expected"] = "stable";
                    break;
                }
                case 1: {
                    long x = pick(g, 1, 9), y = pick(g, -9, 9);
                    j["kind"] = "quotient-map";
                    j["inputs"] = {{"map", {"x^2", "x y", "y^2 + x"}}, {"point", {{"x", x}, {"y", y}}}};
                    j["expected"] = {1, Rational(y, x).str(), Rational(y * y + x, x * x).str()};
                    break;
                }
                case 2: {
                    j["kind"] = "delta";
                    j["inputs"] = {{"entries", {{{"A", 1}, {"S", Rational(pick(g, 1, 9), pick(g, 1, 9)).str()}},
                                                {{"A", 2}, {"S", Rational(pick(g, 1, 9), pick(g, 1, 9)).str()}}}}};
                    j["expected"] = "1";
                    break;
                }
                default: {
                    j["kind"] = "quadric-rank";
                    j["inputs"] = {{"quadric", "x^2 + a y^2 + b z^2"},
                                   {"vars", {"x", "y", "z"}},
                                   {"params", {{"a", pick(g, 0, 1)}, {"b", pick(g, 0, 1)}}}};
                    j["expected"] = pick(g, 1, 3);
                }
            }
            std::ofstream(dir / ("s" + std::to_string(i) + ".json")) << j.dump(1);
        }
    };
    auto r = run("report determinism across thread counts", n, [&](std::size_t i) -> std::string {
        if (i % per_suite == 0) {
            make_suite();
            Report base = verify_all(dir, 1);
            baseline_table = render_table(base, true);
            baseline_json = to_json(base).dump();
        }
        unsigned threads = pick(g, 1, 8);
        Report rep = verify_all(dir, threads);
        if (render_table(rep, true) != baseline_table) return "table differs at " + std::to_string(threads) + " threads";
        if (to_json(rep).dump() != baseline_json) return "json differs at " + std::to_string(threads) + " threads";
        if (render_table(report_from_json(to_json(rep)), true) != baseline_table) return "json round trip";
        return "";
    });
    fs::remove_all(dir);
    return r;
}

std::vector<PropertyResult> all(std::uint64_t seed, std::size_t n, const std::filesystem::path& scratch) {
    return {rational_field(seed, n),         integral_additivity(seed + 1, n), intersection_forms(seed + 2, n),
            zariski_postconditions(seed + 3, n), git_partition(seed + 4, n),
            report_determinism(seed + 5, n, scratch)};
}

}  // namespace kst::props
