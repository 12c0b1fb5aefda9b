#pragma once

#include "kst/zariski.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kst {

using Trace = std::vector<std::string>;

struct FujitaScenario {
    ThreefoldLattice X;
    DivisorPath D;  // anticanonical path in u
    ThreefoldSchedule schedule;
    std::vector<CurveFunctional> curves;  // nefness tests for the positive parts
    Rational A = 1;
    Rational V = 26;
};

// (1/V) * integral of P(u)^3 over the schedule window. The schedule is verified
// first and V is checked against D(0)^3.
Rational s_invariant(const FujitaScenario& sc, Trace* trace = nullptr);
Rational beta(const FujitaScenario& sc, Trace* trace = nullptr);

struct Membership {
    std::size_t curve;   // surface basis index of a curve through the point
    Rational mult = 1;   // local intersection multiplicity with C at the point
};

struct FlagScenario {
    Rational V = 26;
    SurfaceLattice S;
    NegativeCurvePool pool;
    std::vector<UClass> restricted;  // P(u)|_S - v*C on each u-piece
    DivisorPath C;                   // the flag curve as a class on S
    std::optional<PiecewisePoly> ord_C;      // ord_C(N(u)|_S); absent means 0
    std::optional<PiecewisePoly> ord_P;      // ord_P(N'(u)|_C); absent means 0
    std::vector<Membership> point_on;        // negative curves through the point
    std::optional<SurfaceSchedule> declared;  // used instead of the oracle when present
};

// P(u)|_S - v*C for each interval of a threefold schedule.
std::vector<UClass> restrict_schedule(const ThreefoldSchedule& sched, const Restriction& r, const DivisorPath& C,
                                      const std::string& v = "v");

// Chamber schedule used for the flag: the declared one if given (after
// verification), otherwise the oracle's.
SurfaceSchedule flag_schedule(const FlagScenario& f);

// Results are polynomials so that symbolic ord data survive; they are constant
// when the inputs are numeric.
Poly s_w2(const FlagScenario& f, Trace* trace = nullptr);
Poly s_w3(const FlagScenario& f, Trace* trace = nullptr);

// min A/S over the entries; throws on S <= 0.
Rational delta_lower_bound(const std::vector<std::pair<Rational, Rational>>& entries);

}  // namespace kst
