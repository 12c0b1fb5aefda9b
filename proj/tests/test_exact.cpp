#include <doctest.h>

#include "kst/matrix.hpp"
#include "kst/piecewise.hpp"
#include "kst/roots.hpp"

using namespace kst;

namespace {
Rational q(const char* s) { return Rational::parse(s); }
Poly P(const char* s) { return parse_poly(s); }
}  // namespace

TEST_CASE("rational basics") {
    CHECK(Rational(6, -4).str() == "-3/2");
    CHECK(q("10/4") == Rational(5, 2));
    CHECK(q(" -7 ") == Rational(-7));
    CHECK_THROWS(q("1/0"));
    CHECK_THROWS(q("1.5"));
    CHECK_THROWS(q("3/-4"));
    CHECK(Rational(2, 3).pow(-2) == Rational(9, 4));
    CHECK_THROWS(Rational(1) / Rational(0));
}

TEST_CASE("poly parse and print") {
    CHECK(P("2(1-u)(u^2-8u+13)") == P("-2u^3+18u^2-42u+26"));
    CHECK(P("2(1-u)(u^2-8u+13)").str() == "-2*u^3 + 18*u^2 - 42*u + 26");
    CHECK(P("-u^2") == -P("u*u"));
    CHECK(P("3/4 x") == Poly::var("x").scaled(Rational(3, 4)));
    CHECK(P("lam^-2 * lam^3") == P("lam"));
    CHECK(P("x/y*y") == P("x"));
    CHECK_THROWS(P("x/(x+1)"));
    CHECK_THROWS(P("(x+1"));
    CHECK(P("0").is_zero());
    Poly p = P("u^2 - 8u + 13");
    CHECK(p * Poly(1) == p);
}

TEST_CASE("evaluate and substitute") {
    CHECK(P("26-2u^3").evaluate({{"u", 1}}) == Rational(24));
    CHECK_THROWS(P("u+v").evaluate({{"u", 1}}));
    Poly s = P("x^2 + y").substitute({{"x", P("a+b")}, {"y", P("a")}});
    CHECK(s == P("a^2 + 2a b + b^2 + a"));
    CHECK_THROWS(P("x+y").substitute({{"x", P("1")}}));
    CHECK(P("x+y").substitute({{"x", P("1")}}, false) == P("1+y"));
    CHECK(P("x^3 y").diff("x") == P("3x^2 y"));
}

TEST_CASE("division") {
    auto d = P("x^2 - y^2").div_exact(P("x - y"));
    REQUIRE(d);
    CHECK(*d == P("x + y"));
    CHECK_FALSE(P("x^2 + 1").div_exact(P("x - 1")));
}

TEST_CASE("piecewise integration") {
    PiecewisePoly f("u", {0, 1}, {P("26 - 2u^3")});
    CHECK(f.integrate_value(0, 1) == Rational(51, 2));
    CHECK(f.integrate_value(Rational(1, 3), Rational(1, 3)) == Rational(0));
    PiecewisePoly g("u", {0, Rational(1, 2)}, {P("2(2u-1)(2u^2-2u-13)")});
    CHECK(g.integrate_value(0, Rational(1, 2)) == Rational(689, 104));
    CHECK(g.integrate_value(0, Rational(1, 2)) / Rational(26) == Rational(53, 208));
    CHECK_THROWS(f.integrate_value(0, 2));
    CHECK_THROWS(PiecewisePoly("u", {0, 1, 2}, {P("u"), P("2")}, true));
    PiecewisePoly h("u", {0, 1, 2}, {P("u"), P("1")}, true);
    CHECK(h.integrate_value(0, 2) == Rational(3, 2));
    PiecewisePoly k("u", {1, 2}, {P("(u-1) k")});
    CHECK(k.integrate(1, 2) == P("k/2"));
}

TEST_CASE("rational roots") {
    auto r = rational_roots(P("3-2u"), 0, 3);
    REQUIRE(r.roots.size() == 1);
    CHECK(r.roots[0] == Rational(3, 2));
    r = rational_roots(P("u^2+1"), 0, 1);
    CHECK(r.roots.empty());
    CHECK_FALSE(r.residual);
    r = rational_roots(P("(u-1)(u-2)"), 0, 3);
    CHECK(r.roots == std::vector<Rational>{1, 2});
    r = rational_roots(P("(u^2-2)(3u-1)^2"), 0, 3);
    CHECK(r.roots == std::vector<Rational>{Rational(1, 3)});
    CHECK(r.residual);
    r = rational_roots(P("u^2-2"), 0, 1);
    CHECK_FALSE(r.residual);
    CHECK(rational_roots(P("u (u - 1)"), 0, 1).roots == std::vector<Rational>{0, 1});
    CHECK_THROWS(rational_roots(Poly(0), 0, 1));
}

TEST_CASE("nonnegativity") {
    CHECK(nonneg_on(P("(u-1)^2"), 0, 2));
    CHECK_FALSE(nonneg_on(P("u^2-2"), 0, 2));
    CHECK(nonneg_on(P("u^2-2"), 2, 3));
    CHECK(nonneg_on(P("2-u"), 0, 2));
    CHECK_FALSE(nonneg_on(P("2-u"), 0, 3));
    CHECK(nonneg_on(P("u(u-1)(u-2)"), 0, 1));
    CHECK(count_real_roots(P("u^3-2u"), -2, 2) == 3);
}

TEST_CASE("matrices") {
    RatMatrix m{{-2, 1}, {1, -1}};
    CHECK(solve(m, {0, -1}) == std::vector<Rational>{1, 2});
    CHECK(det(m) == Rational(1));
    PolyMatrix g{{-1, 0}, {0, -1}};
    auto s = solve_linear(g, {P("-(v-1)"), P("-(v-1)")});
    REQUIRE(s.polynomial);
    CHECK(s.values[0] == P("v-1"));
    CHECK(s.values[1] == P("v-1"));
    auto id = solve_linear(PolyMatrix::identity(2), {P("u"), P("1-u")});
    CHECK(id.values[1] == P("1-u"));
    auto nonpoly = solve_linear(PolyMatrix{{P("u"), 0}, {0, 1}}, {1, 1});
    CHECK_FALSE(nonpoly.polynomial);
    CHECK(nonpoly.den == P("u"));
    CHECK_THROWS(solve_linear(PolyMatrix{{1, 1}, {1, 1}}, {0, 0}));
    CHECK(rank(RatMatrix{{1, 2}, {2, 4}}) == 1);
    auto ker = kernel(RatMatrix{{1, 2}, {2, 4}});
    REQUIRE(ker.size() == 1);
    CHECK(ker[0] == std::vector<Rational>{-2, 1});
    PolyMatrix sym{{P("a"), P("b")}, {P("b"), P("a")}};
    CHECK(det(sym) == P("a^2 - b^2"));
}
