#include "kst/poly.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace kst {

bool GrlexDesc::operator()(const Mono& a, const Mono& b) const {
    long da = std::accumulate(a.begin(), a.end(), 0L);
    long db = std::accumulate(b.begin(), b.end(), 0L);
    if (da != db) return da > db;
    return a > b;
}

Poly::Poly(long c) {
    if (c != 0) terms_.emplace(Mono{}, Rational(c));
}

Poly::Poly(const Rational& c) {
    if (!c.is_zero()) terms_.emplace(Mono{}, c);
}

Poly::Poly(std::vector<std::string> vars) : vars_(std::move(vars)) {}

Poly Poly::var(const std::string& name) {
    Poly p(std::vector<std::string>{name});
    p.terms_.emplace(Mono{1}, Rational(1));
    return p;
}

Poly Poly::monomial(const std::vector<std::string>& vars, const Mono& e, const Rational& c) {
    if (e.size() != vars.size()) throw std::invalid_argument("monomial: exponent length mismatch");
    Poly p(vars);
    p.add_term(e, c);
    return p;
}

bool Poly::is_constant() const {
    return terms_.empty() ||
           (terms_.size() == 1 && std::all_of(terms_.begin()->first.begin(),
                                              terms_.begin()->first.end(),
                                              [](int x) { return x == 0; }));
}

Rational Poly::constant_value() const {
    if (!is_constant()) throw std::domain_error("polynomial is not constant: " + str());
    return constant_term();
}

Rational Poly::constant_term() const { return coeff(Mono(vars_.size(), 0)); }

Rational Poly::coeff(const Mono& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
}

int Poly::var_index(const std::string& name) const {
    auto it = std::find(vars_.begin(), vars_.end(), name);
    return it == vars_.end() ? -1 : static_cast<int>(it - vars_.begin());
}

bool Poly::uses(const std::string& name) const {
    int i = var_index(name);
    if (i < 0) return false;
    for (const auto& [e, c] : terms_)
        if (e[i] != 0) return true;
    return false;
}

std::vector<std::string> Poly::used_vars() const {
    std::vector<std::string> out;
    for (const auto& v : vars_)
        if (uses(v)) out.push_back(v);
    return out;
}

int Poly::degree(const std::string& name) const {
    int i = var_index(name);
    if (i < 0 || terms_.empty()) return 0;
    int d = terms_.begin()->first[i];
    for (const auto& [e, c] : terms_) d = std::max(d, e[i]);
    return d;
}

int Poly::min_degree(const std::string& name) const {
    int i = var_index(name);
    if (i < 0 || terms_.empty()) return 0;
    int d = terms_.begin()->first[i];
    for (const auto& [e, c] : terms_) d = std::min(d, e[i]);
    return d;
}

int Poly::total_degree() const {
    if (terms_.empty()) return 0;
    return std::accumulate(terms_.begin()->first.begin(), terms_.begin()->first.end(), 0);
}

bool Poly::has_negative_exponent() const {
    for (const auto& [e, c] : terms_)
        for (int x : e)
            if (x < 0) return true;
    return false;
}

const Mono& Poly::leading_mono() const {
    if (terms_.empty()) throw std::domain_error("leading term of zero polynomial");
    return terms_.begin()->first;
}

const Rational& Poly::leading_coeff() const {
    if (terms_.empty()) throw std::domain_error("leading term of zero polynomial");
    return terms_.begin()->second;
}

Poly Poly::with_vars(const std::vector<std::string>& vars) const {
    std::vector<int> where(vars_.size(), -1);
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        auto it = std::find(vars.begin(), vars.end(), vars_[i]);
        if (it != vars.end()) where[i] = static_cast<int>(it - vars.begin());
    }
    Poly out(vars);
    for (const auto& [e, c] : terms_) {
        Mono m(vars.size(), 0);
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (where[i] < 0) throw std::invalid_argument("with_vars: variable '" + vars_[i] + "' dropped");
            m[where[i]] = e[i];
        }
        out.terms_.emplace(std::move(m), c);
    }
    return out;
}

Poly Poly::trimmed() const { return with_vars(used_vars()); }

void Poly::align_with(Poly& other) {
    if (vars_ == other.vars_) return;
    std::vector<std::string> u = vars_;
    for (const auto& v : other.vars_)
        if (std::find(u.begin(), u.end(), v) == u.end()) u.push_back(v);
    if (u != vars_) *this = with_vars(u);
    if (u != other.vars_) other = other.with_vars(u);
}

void Poly::add_term(const Mono& e, const Rational& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Poly Poly::operator-() const {
    Poly r = *this;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
}

Poly& Poly::operator+=(const Poly& o) {
    Poly b = o;
    align_with(b);
    for (const auto& [e, c] : b.terms_) add_term(e, c);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    Poly b = o;
    align_with(b);
    for (const auto& [e, c] : b.terms_) add_term(e, -c);
    return *this;
}

Poly operator*(const Poly& x, const Poly& y) {
    Poly a = x, b = y;
    a.align_with(b);
    Poly out(a.vars_);
    Mono m(a.vars_.size());
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) {
            for (std::size_t i = 0; i < m.size(); ++i) m[i] = ea[i] + eb[i];
            out.add_term(m, ca * cb);
        }
    return out;
}

Poly& Poly::operator*=(const Poly& o) { return *this = *this * o; }

Poly Poly::scaled(const Rational& c) const {
    if (c.is_zero()) return Poly(vars_);
    Poly r = *this;
    for (auto& [e, k] : r.terms_) k *= c;
    return r;
}

Poly Poly::pow(unsigned e) const {
    Poly r = Poly(1).with_vars(vars_), b = *this;
    while (e) {
        if (e & 1) r *= b;
        e >>= 1;
        if (e) b *= b;
    }
    return r;
}

bool operator==(const Poly& a, const Poly& b) { return (a - b).is_zero(); }

Rational Poly::evaluate(const VarValues& point) const {
    std::vector<const Rational*> val(vars_.size(), nullptr);
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        auto it = point.find(vars_[i]);
        if (it != point.end()) val[i] = &it->second;
    }
    Rational sum(0);
    for (const auto& [e, c] : terms_) {
        Rational t = c;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (!val[i]) throw std::invalid_argument("evaluate: no value for variable '" + vars_[i] + "'");
            t *= val[i]->pow(e[i]);
        }
        sum += t;
    }
    return sum;
}

Poly Poly::eval_partial(const VarValues& point) const {
    std::vector<const Rational*> val(vars_.size(), nullptr);
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        auto it = point.find(vars_[i]);
        if (it != point.end()) val[i] = &it->second;
    }
    Poly out(vars_);
    for (const auto& [e, c] : terms_) {
        Rational t = c;
        Mono m = e;
        for (std::size_t i = 0; i < e.size(); ++i)
            if (val[i] && e[i] != 0) {
                t *= val[i]->pow(e[i]);
                m[i] = 0;
            }
        out.add_term(m, t);
    }
    return out;
}

Poly Poly::substitute(const std::map<std::string, Poly>& map, bool require_all) const {
    std::vector<const Poly*> img(vars_.size(), nullptr);
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        auto it = map.find(vars_[i]);
        if (it != map.end()) img[i] = &it->second;
        else if (require_all && uses(vars_[i]))
            throw std::invalid_argument("substitute: no image for variable '" + vars_[i] + "'");
    }
    // Power cache per variable keeps repeated substitutions cheap.
    std::vector<std::map<int, Poly>> cache(vars_.size());
    auto power = [&](std::size_t i, int k) -> const Poly& {
        auto it = cache[i].find(k);
        if (it != cache[i].end()) return it->second;
        if (k < 0) {
            const Poly& b = *img[i];
            if (b.size() != 1) throw std::domain_error("substitute: negative power of non-monomial");
            Poly inv = Poly::monomial(b.vars_, b.leading_mono(), Rational(1) / b.leading_coeff());
            for (auto& x : const_cast<Mono&>(inv.terms_.begin()->first)) x = -x;
            return cache[i].emplace(k, inv.pow(static_cast<unsigned>(-k))).first->second;
        }
        return cache[i].emplace(k, img[i]->pow(static_cast<unsigned>(k))).first->second;
    };
    std::vector<std::string> keep;
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (!img[i]) keep.push_back(vars_[i]);
    Poly out(keep);
    for (const auto& [e, c] : terms_) {
        Mono rest(keep.size(), 0);
        Poly t(keep);
        std::size_t k = 0;
        for (std::size_t i = 0; i < e.size(); ++i)
            if (!img[i]) rest[k++] = e[i];
        t.add_term(rest, c);
        for (std::size_t i = 0; i < e.size(); ++i)
            if (img[i] && e[i] != 0) t *= power(i, e[i]);
        out += t;
    }
    return out;
}

Poly Poly::diff(const std::string& var) const {
    int i = var_index(var);
    if (i < 0) throw std::invalid_argument("diff: unknown variable '" + var + "'");
    Poly out(vars_);
    for (const auto& [e, c] : terms_) {
        if (e[i] == 0) continue;
        Mono m = e;
        m[i] -= 1;
        out.add_term(m, c * Rational(e[i]));
    }
    return out;
}

Poly Poly::antiderivative(const std::string& var) const {
    Poly base = *this;
    if (base.var_index(var) < 0) {
        auto v = vars_;
        v.push_back(var);
        base = with_vars(v);
    }
    int i = base.var_index(var);
    Poly out(base.vars_);
    for (const auto& [e, c] : base.terms_) {
        if (e[i] == -1) throw std::domain_error("antiderivative: logarithmic term");
        Mono m = e;
        m[i] += 1;
        out.add_term(m, c / Rational(m[i]));
    }
    return out;
}

Poly Poly::integrate(const std::string& var, const Poly& lo, const Poly& hi) const {
    Poly F = antiderivative(var);
    return F.substitute({{var, hi}}, false) - F.substitute({{var, lo}}, false);
}

std::vector<Poly> Poly::coeffs_in(const std::string& var) const {
    int i = var_index(var);
    if (i < 0) return {*this};
    std::vector<std::string> rest;
    for (const auto& v : vars_)
        if (v != var) rest.push_back(v);
    std::vector<Poly> out(static_cast<std::size_t>(std::max(0, degree(var))) + 1, Poly(rest));
    for (const auto& [e, c] : terms_) {
        if (e[i] < 0) throw std::domain_error("coeffs_in: negative exponent");
        Mono m;
        for (std::size_t j = 0; j < e.size(); ++j)
            if (static_cast<int>(j) != i) m.push_back(e[j]);
        out[e[i]].add_term(m, c);
    }
    return out;
}

std::pair<Poly, Poly> Poly::divmod(const Poly& d) const {
    if (d.is_zero()) throw std::domain_error("divmod: division by zero polynomial");
    Poly p = *this, dd = d;
    p.align_with(dd);
    if (p.has_negative_exponent() || dd.has_negative_exponent())
        throw std::domain_error("divmod: Laurent polynomial");
    Poly q(p.vars_), r(p.vars_);
    const Mono& ld = dd.leading_mono();
    const Rational& lc = dd.leading_coeff();
    while (!p.is_zero()) {
        const Mono lm = p.leading_mono();
        const Rational c = p.leading_coeff();
        bool divides = true;
        Mono m(lm.size());
        for (std::size_t i = 0; i < lm.size(); ++i) {
            m[i] = lm[i] - ld[i];
            if (m[i] < 0) divides = false;
        }
        if (divides) {
            Poly t = Poly::monomial(p.vars_, m, c / lc);
            q += t;
            p -= t * dd;
        } else {
            r.add_term(lm, c);
            p.terms_.erase(p.terms_.begin());
        }
    }
    return {q, r};
}

std::optional<Poly> Poly::div_exact(const Poly& d) const {
    auto [q, r] = divmod(d);
    if (!r.is_zero()) return std::nullopt;
    return q;
}

std::string Poly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        std::string mono;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += vars_[i];
            if (e[i] != 1) mono += "^" + std::to_string(e[i]);
        }
        Rational a = c.abs();
        if (first) {
            if (c.sign() < 0) os << "-";
        } else {
            os << (c.sign() < 0 ? " - " : " + ");
        }
        if (mono.empty()) os << a.str();
        else if (a == Rational(1)) os << mono;
        else os << a.str() << "*" << mono;
        first = false;
    }
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const Poly& p) { return os << p.str(); }

namespace {

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    Poly run() {
        Poly p = expr();
        skip();
        if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
        return p;
    }

    std::vector<std::string> seen;

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw std::invalid_argument("parse error in '" + s_ + "' at " + std::to_string(i_) + ": " + msg);
    }
    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    char peek() {
        skip();
        return i_ < s_.size() ? s_[i_] : '\0';
    }
    static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
    static bool ident_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
    }

    Poly expr() {
        Poly acc = term();
        for (;;) {
            char c = peek();
            if (c == '+') { ++i_; acc += term(); }
            else if (c == '-') { ++i_; acc -= term(); }
            else return acc;
        }
    }

    Poly term() {
        Poly acc = unary();
        for (;;) {
            char c = peek();
            if (c == '*') { ++i_; acc *= unary(); }
            else if (c == '/') { ++i_; acc = divide(acc, unary()); }
            else if (c == '(' || ident_start(c) || std::isdigit(static_cast<unsigned char>(c))) acc *= unary();
            else return acc;
        }
    }

    Poly divide(const Poly& a, const Poly& b) {
        if (b.is_zero()) fail("division by zero");
        if (b.size() != 1) fail("division by a non-monomial");
        Mono m = b.leading_mono();
        for (int& x : m) x = -x;
        return a * Poly::monomial(b.vars(), m, Rational(1) / b.leading_coeff());
    }

    Poly unary() {
        char c = peek();
        if (c == '-') { ++i_; return -unary(); }
        if (c == '+') { ++i_; return unary(); }
        return power();
    }

    int exponent() {
        bool paren = false;
        if (peek() == '(') { paren = true; ++i_; }
        bool neg = false;
        if (peek() == '-') { neg = true; ++i_; }
        skip();
        std::size_t st = i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
        if (st == i_) fail("expected integer exponent");
        int e = std::stoi(s_.substr(st, i_ - st));
        if (paren) {
            if (peek() != ')') fail("expected ')'");
            ++i_;
        }
        return neg ? -e : e;
    }

    Poly power() {
        Poly base = primary();
        if (peek() == '^') {
            ++i_;
            int e = exponent();
            if (e >= 0) return base.pow(static_cast<unsigned>(e));
            return divide(Poly(1), base).pow(static_cast<unsigned>(-e));
        }
        return base;
    }

    Poly primary() {
        char c = peek();
        if (c == '(') {
            ++i_;
            Poly p = expr();
            if (peek() != ')') fail("expected ')'");
            ++i_;
            return p;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t st = i_;
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
            return Poly(Rational(mpz_class(s_.substr(st, i_ - st), 10)));
        }
        if (ident_start(c)) {
            std::size_t st = i_;
            while (i_ < s_.size() && ident_char(s_[i_])) ++i_;
            std::string name = s_.substr(st, i_ - st);
            if (std::find(seen.begin(), seen.end(), name) == seen.end()) seen.push_back(name);
            return Poly::var(name);
        }
        if (c == '\0') fail("unexpected end of input");
        fail("unexpected '" + std::string(1, c) + "'");
    }

    const std::string& s_;
    std::size_t i_ = 0;
};

}  // namespace

Poly parse_poly(const std::string& text, const std::vector<std::string>& var_order) {
    Parser p(text);
    Poly out = p.run();
    std::vector<std::string> order = var_order;
    for (const auto& v : p.seen)
        if (std::find(order.begin(), order.end(), v) == order.end()) order.push_back(v);
    return out.with_vars(order);
}

}  // namespace kst
