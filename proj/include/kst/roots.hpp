#pragma once

#include "kst/poly.hpp"

#include <vector>

namespace kst {

struct RootReport {
    std::vector<Rational> roots;  // distinct, sorted
    bool residual = false;        // real roots in the interval that are not rational
};

// Rational roots of a univariate polynomial on the closed interval [a, b].
// Candidates have denominators dividing the leading coefficient of the
// primitive integer form; real roots are isolated with a Sturm sequence.
RootReport rational_roots(const Poly& p, const Rational& a, const Rational& b);

// Number of distinct real roots in [a, b].
std::size_t count_real_roots(const Poly& p, const Rational& a, const Rational& b);

// Exact test that p >= 0 everywhere on [a, b].
bool nonneg_on(const Poly& p, const Rational& a, const Rational& b);

}  // namespace kst
