#include <doctest.h>

#include "kst/stability.hpp"

using namespace kst;

namespace {

Poly P(const char* s) { return parse_poly(s); }

ThreefoldLattice quartic_dp_blowup() {
    ThreefoldLattice X({"H", "E1", "E2"});
    X.set("H", "H", "H", 2);
    X.set("E1", "E1", "E1", -4);
    X.set("E2", "E2", "E2", -4);
    X.set("H", "E1", "E1", -2);
    X.set("H", "E2", "E2", -2);
    return X;
}

FujitaScenario prop_delta() {
    FujitaScenario sc;
    sc.X = quartic_dp_blowup();
    const auto& b = sc.X.basis();
    sc.D = parse_divisor("(3-u) H - (1-u) E1 - E2", b);
    sc.schedule.breaks = {0, 1, 2};
    sc.schedule.P = {sc.D, parse_divisor("(3-u) H - E2", b)};
    sc.schedule.N = {DivisorPath(b), parse_divisor("(u-1) E1", b)};
    sc.curves = {{"f1", b, {0, -1, 0}}, {"f2", b, {0, 0, -1}}, {"line", b, {1, 0, 0}}};
    sc.A = 1;
    sc.V = 26;
    return sc;
}

FlagScenario z_flag(const FujitaScenario& sc) {
    FlagScenario f;
    f.S = SurfaceLattice({"Z", "e1", "e2"}, RatMatrix{{0, 1, 1}, {1, -1, 0}, {1, 0, -1}});
    f.pool = NegativeCurvePool::from_names(f.S, {"e1", "e2"});
    Restriction r(sc.X.basis(), f.S.basis(), RatMatrix{{1, 1, 1}, {1, 1, 1}, {0, 1, 1}});
    f.C = DivisorPath::basis_element(f.S.basis(), "Z");
    f.restricted = restrict_schedule(sc.schedule, r, f.C);
    return f;
}

FlagScenario l_flag(const FujitaScenario& sc) {
    FlagScenario f;
    f.S = SurfaceLattice({"l1", "l2", "e1", "e2"},
                         RatMatrix{{-1, 1, 1, 0}, {1, -1, 0, 1}, {1, 0, -1, 0}, {0, 1, 0, -1}});
    f.pool = NegativeCurvePool::from_names(f.S, {"l2", "e1", "e2"});
    Restriction r(sc.X.basis(), f.S.basis(), RatMatrix{{1, 1, 1, 1}, {1, 1, 1, 1}, {0, 0, 1, 1}});
    f.C = DivisorPath::basis_element(f.S.basis(), "l1");
    f.restricted = restrict_schedule(sc.schedule, r, f.C);
    return f;
}

}  // namespace

TEST_CASE("threefold cubes") {
    auto sc = prop_delta();
    CHECK(sc.X.cube(sc.schedule.P[0]) == P("26-18u"));
    CHECK(sc.X.cube(sc.schedule.P[1]) == P("40-2u^3+18u^2-48u"));
    CHECK(sc.X.cube(DivisorPath(sc.X.basis())).is_zero());
    CHECK(sc.X.cube(parse_divisor("(3-2u) H", sc.X.basis())) == P("2(3-2u)^3"));
}

TEST_CASE("Fujita invariant of the surface") {
    auto sc = prop_delta();
    Trace tr;
    CHECK(s_invariant(sc, &tr) == Rational(3, 4));
    CHECK(tr.size() == 2);
    CHECK(beta(sc) == Rational(1, 4));
    auto bad = sc;
    bad.V = 25;
    CHECK_THROWS(s_invariant(bad));
    auto neg = sc;
    neg.schedule.N[1] = parse_divisor("(1-u) E1", sc.X.basis());
    CHECK_THROWS(s_invariant(neg));
}

TEST_CASE("nested flags through the conic fibre") {
    auto sc = prop_delta();
    auto z = z_flag(sc);
    CHECK(s_w2(z) == Poly(Rational(3, 4)));
    CHECK(s_w3(z) == Poly(Rational(21, 26)));
    auto l = l_flag(sc);
    CHECK(s_w2(l) == Poly(Rational(99, 104)));
    CHECK(s_w3(l) == Poly(Rational(37, 52)));
    l.point_on = {{l.S.index("l2"), 1}};
    CHECK(s_w3(l) == Poly(Rational(99, 104)));
    l.point_on = {{l.S.index("e2"), 1}, {l.S.index("e1"), 1}};
    CHECK_THROWS(s_w3(l));
}

TEST_CASE("delta bound") {
    CHECK(delta_lower_bound({{1, Rational(3, 4)}, {1, Rational(99, 104)}, {1, Rational(99, 104)}}) ==
          Rational(104, 99));
    CHECK(delta_lower_bound({{1, 1}}) == Rational(1));
    CHECK(delta_lower_bound({{Rational(104, 99) * Rational(7, 3), Rational(7, 3)}}) == Rational(104, 99));
    CHECK_THROWS(delta_lower_bound({{1, 0}}));
}
