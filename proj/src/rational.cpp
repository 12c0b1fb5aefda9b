#include "kst/rational.hpp"

#include <cctype>
#include <ostream>
#include <stdexcept>

namespace kst {

Rational::Rational(long num, long den) : q_(num, den) {
    if (den == 0) throw std::domain_error("rational: zero denominator");
    q_.canonicalize();
}

Rational::Rational(const mpz_class& num, const mpz_class& den) : q_(num, den) {
    if (den == 0) throw std::domain_error("rational: zero denominator");
    q_.canonicalize();
}

namespace {

bool valid_integer(const std::string& s) {
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

mpz_class parse_integer(std::string s) {
    if (!s.empty() && s[0] == '+') s.erase(0, 1);
    return mpz_class(s, 10);
}

}  // namespace

Rational Rational::parse(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    auto slash = s.find('/');
    if (slash == std::string::npos) {
        if (!valid_integer(s)) throw std::invalid_argument("not a rational: '" + text + "'");
        return Rational(parse_integer(s));
    }
    std::string n = s.substr(0, slash), d = s.substr(slash + 1);
    if (!valid_integer(n) || !valid_integer(d) || d[0] == '-' || d[0] == '+')
        throw std::invalid_argument("not a rational: '" + text + "'");
    mpz_class den = parse_integer(d);
    if (den == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    return Rational(parse_integer(n), den);
}

Rational Rational::abs() const {
    Rational r;
    r.q_ = ::abs(q_);
    return r;
}

Rational Rational::inverse() const {
    if (is_zero()) throw std::domain_error("rational: division by zero");
    Rational r;
    r.q_ = 1 / q_;
    r.q_.canonicalize();
    return r;
}

Rational Rational::pow(int e) const {
    if (e < 0) return inverse().pow(-e);
    Rational r(1), b = *this;
    while (e) {
        if (e & 1) r *= b;
        e >>= 1;
        if (e) b *= b;
    }
    return r;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("rational: division by zero");
    q_ /= o.q_;
    return *this;
}

std::string Rational::str() const {
    if (is_integer()) return q_.get_num().get_str();
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

std::size_t Rational::hash() const {
    std::hash<std::string> h;
    return h(str());
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace kst
