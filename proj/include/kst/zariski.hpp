#pragma once

#include "kst/lattice.hpp"
#include "kst/piecewise.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kst {

// Curves allowed in negative parts, by surface basis index.
struct NegativeCurvePool {
    std::vector<std::size_t> candidates;

    static NegativeCurvePool from_names(const SurfaceLattice& s, const std::vector<std::string>& names);
};

struct Decomposition {
    DivisorPath P, N;
    std::vector<std::size_t> active;  // sorted basis indices
};

// Classical Zariski algorithm for a divisor with rational coefficients.
// Throws std::domain_error when the pool cannot support a decomposition.
Decomposition zariski_decompose(const SurfaceLattice& s, const DivisorPath& D, const NegativeCurvePool& pool);

// True iff the Gram matrix restricted to idx is negative definite.
bool negative_definite(const SurfaceLattice& s, const std::vector<std::size_t>& idx);

// Positive and negative parts for a fixed active set, solved symbolically.
struct SymbolicParts {
    DivisorPath P, N;
};
SymbolicParts solve_active(const SurfaceLattice& s, const DivisorPath& D, const std::vector<std::size_t>& active);

// One chamber in v: lo <= v <= hi, with lo/hi polynomials in u (constants in the 1-D case).
struct VPiece {
    Poly lo, hi;
    std::vector<std::size_t> active;
    DivisorPath P, N;
    std::string ends_by;  // condition that produced hi: "vol", "N:<curve>", "PC:<curve>", "window"
};

// Chambers over a u-interval (ua == ub for a fixed u).
struct UPiece {
    Rational ua, ub;
    std::vector<VPiece> chambers;
};

struct SurfaceSchedule {
    std::string u_var = "u", v_var = "v";
    std::vector<UPiece> pieces;

    // Last chamber's upper bound on each u-piece.
    PiecewisePoly threshold() const;
    // Merges neighbouring u-pieces with identical chambers.
    SurfaceSchedule normalized() const;
};

// Walks D(v) from v = v0 while the divisor stays pseudoeffective (or up to v_hi).
// D must have coefficients in v only.
std::vector<VPiece> walk_v(const SurfaceLattice& s, const DivisorPath& D, const NegativeCurvePool& pool,
                           const std::string& v, const Rational& v0, const std::optional<Rational>& v_hi = {});

// Threshold and chambers for D(u, v) = restricted(u) - v*C over u-pieces; each
// input piece carries its own polynomial class in u.
struct UClass {
    Rational ua, ub;
    DivisorPath D;  // in u and v
};
SurfaceSchedule parametric_zariski(const SurfaceLattice& s, const std::vector<UClass>& pieces,
                                   const NegativeCurvePool& pool, const std::string& u = "u",
                                   const std::string& v = "v");

// Threshold t(u) of the pseudoeffective cone along v.
PiecewisePoly pseff_threshold(const SurfaceLattice& s, const std::vector<UClass>& pieces,
                              const NegativeCurvePool& pool, const std::string& u = "u", const std::string& v = "v");

struct VerifyReport {
    bool pass = true;
    std::string failure;  // first violated condition
    std::vector<std::string> notes;

    void fail(const std::string& why) {
        if (pass) failure = why;
        pass = false;
    }
};

// Checks a surface schedule against D on each u-piece. Identities (P + N = D,
// P.active = 0, continuity of P^2 across chamber walls, vanishing volume at the
// threshold) are exact in (u, v); sign conditions are exact in v at sampled u.
VerifyReport verify_schedule(const SurfaceLattice& s, const SurfaceSchedule& sched, const std::vector<UClass>& pieces,
                             const NegativeCurvePool& pool);

// One effective prime divisor in a negative part, with its coefficient.
struct NegativeTerm {
    Poly coeff;
    std::string name;
    DivisorPath cls;
};

// Threefold schedule in u, declared by the source.
struct ThreefoldSchedule {
    std::string var = "u";
    std::vector<Rational> breaks;
    std::vector<DivisorPath> P, N;
    // Optional per interval: N as a sum of effective divisors that need not be
    // basis elements. When empty, N's basis coefficients are tested instead.
    std::vector<std::vector<NegativeTerm>> N_terms;

    std::size_t size() const { return P.size(); }
};

// Class identity, N >= 0 (via N_terms when given), nefness against test curves (all exact on each
// interval) and continuity of P^3 at the breakpoints.
VerifyReport verify_schedule(const ThreefoldLattice& X, const ThreefoldSchedule& sched, const DivisorPath& D,
                             const std::vector<CurveFunctional>& curves);

// Piecewise P^3 of a threefold schedule.
PiecewisePoly volume_function(const ThreefoldLattice& X, const ThreefoldSchedule& sched);

// Same chambers and same classes after normalization.
bool same_schedule(const SurfaceSchedule& a, const SurfaceSchedule& b, std::string* why = nullptr);

}  // namespace kst
