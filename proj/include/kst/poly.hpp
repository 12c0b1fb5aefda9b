#pragma once

#include "kst/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kst {

using Mono = std::vector<int>;

// Graded lexicographic, largest monomial first.
struct GrlexDesc {
    bool operator()(const Mono& a, const Mono& b) const;
};

using VarValues = std::map<std::string, Rational>;

// Sparse polynomial over the rationals in named variables. Exponents may be
// negative (Laurent monomials); operations that cannot handle them say so.
class Poly {
public:
    using Terms = std::map<Mono, Rational, GrlexDesc>;

    Poly() = default;
    Poly(long c);
    Poly(int c) : Poly(static_cast<long>(c)) {}
    Poly(const Rational& c);
    explicit Poly(std::vector<std::string> vars);

    static Poly var(const std::string& name);
    static Poly monomial(const std::vector<std::string>& vars, const Mono& e, const Rational& c);

    const std::vector<std::string>& vars() const { return vars_; }
    const Terms& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Rational constant_value() const;  // throws unless constant
    Rational constant_term() const;
    Rational coeff(const Mono& e) const;

    int var_index(const std::string& name) const;  // -1 if absent
    bool uses(const std::string& name) const;
    std::vector<std::string> used_vars() const;
    int degree(const std::string& name) const;
    int min_degree(const std::string& name) const;
    int total_degree() const;
    bool has_negative_exponent() const;

    const Mono& leading_mono() const;
    const Rational& leading_coeff() const;

    // Same polynomial over a different variable ordering; every used variable must remain.
    Poly with_vars(const std::vector<std::string>& vars) const;
    Poly trimmed() const;

    Poly operator-() const;
    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const Poly& o);
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    Poly scaled(const Rational& c) const;
    Poly pow(unsigned e) const;

    // Semantic equality (variable lists may differ).
    friend bool operator==(const Poly& a, const Poly& b);
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    Rational evaluate(const VarValues& point) const;
    Poly eval_partial(const VarValues& point) const;
    Poly substitute(const std::map<std::string, Poly>& map, bool require_all = true) const;
    Poly diff(const std::string& var) const;
    Poly antiderivative(const std::string& var) const;
    Poly integrate(const std::string& var, const Poly& lo, const Poly& hi) const;

    // Coefficients of var^0, var^1, ..., as polynomials in the remaining variables.
    std::vector<Poly> coeffs_in(const std::string& var) const;

    // Division by a single divisor in grlex order.
    std::pair<Poly, Poly> divmod(const Poly& d) const;
    std::optional<Poly> div_exact(const Poly& d) const;

    std::string str() const;

private:
    void align_with(Poly& other);
    void add_term(const Mono& e, const Rational& c);

    std::vector<std::string> vars_;
    Terms terms_;
};

std::ostream& operator<<(std::ostream& os, const Poly& p);

// Expression parser: integers, rationals via '/', identifiers, + - * ^ and
// parentheses. Division is allowed by constants and single monomials only.
Poly parse_poly(const std::string& text, const std::vector<std::string>& var_order = {});

}  // namespace kst
