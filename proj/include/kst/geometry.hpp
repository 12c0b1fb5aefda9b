#pragma once

#include "kst/matrix.hpp"
#include "kst/poly.hpp"

#include <map>
#include <string>
#include <vector>

namespace kst {

// q(x) = x^T M x over the listed variables; entries are polynomials in parameters.
struct QuadraticForm {
    std::vector<std::string> vars;
    PolyMatrix M;

    // A cross term c*xi*xj contributes c/2 to M(i,j) and M(j,i). Throws unless
    // every term has degree exactly 2 in `vars`.
    static QuadraticForm from_poly(const Poly& q, const std::vector<std::string>& vars);
    Poly poly() const;
    RatMatrix at(const VarValues& params) const;  // throws on a missing parameter
};

std::size_t quadric_rank_at(const QuadraticForm& q, const VarValues& params);

struct SingularLocus {
    std::size_t rank = 0;
    std::vector<std::vector<Rational>> kernel;  // empty for a nondegenerate form
    // Set when the kernel is one-dimensional; first nonzero entry scaled to 1.
    std::vector<Rational> point;
};

SingularLocus singular_kernel(const QuadraticForm& q, const VarValues& params);

// Equations over a product of projective spaces; factors[k] names the
// homogeneous coordinates of the k-th factor.
struct PolySystem {
    std::vector<Poly> equations;
    std::vector<std::vector<std::string>> factors;
};

using ProjPoint = std::vector<std::vector<Rational>>;

// Rank of the Jacobian in the affine chart that sets the first nonzero
// coordinate of each factor to 1. Throws if the point is off the variety.
std::size_t jacobian_rank_at(const PolySystem& sys, const ProjPoint& pt);

// Substitutes and reads off the quadratic form in the fibre variables.
QuadraticForm conic_fiber_form(const Poly& quadric, const std::map<std::string, Poly>& substitution,
                               const std::vector<std::string>& fiber_vars);

Poly discriminant(const QuadraticForm& q);

// p == c*q for some nonzero rational c; two zero polynomials count as proportional.
bool proportional(const Poly& p, const Poly& q, Rational* factor = nullptr);

// Gradient of q at a numeric point (parameters and variables together).
std::vector<Rational> gradient_at(const Poly& q, const std::vector<std::string>& vars, const VarValues& at);

}  // namespace kst
