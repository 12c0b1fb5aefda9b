#include "kst/git.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <stdexcept>

namespace kst {

std::size_t TorusAction::index(const std::string& name) const {
    auto it = std::find(coords.begin(), coords.end(), name);
    if (it == coords.end()) throw std::invalid_argument("unknown coordinate '" + name + "'");
    return static_cast<std::size_t>(it - coords.begin());
}

void TorusAction::validate() const {
    if (coords.size() != weights.size()) throw std::invalid_argument("torus action: weight count mismatch");
    for (const auto& w : weights)
        if (w.size() != rank()) throw std::invalid_argument("torus action: ragged weights");
    if (rank() > 2) throw std::invalid_argument("torus action: rank > 2 is not supported");
}

std::string to_string(StabilityClass c) {
    switch (c) {
        case StabilityClass::Unstable: return "unstable";
        case StabilityClass::Stable: return "stable";
        case StabilityClass::PolystableNotStable: return "polystable";
        case StabilityClass::SemistableNotPolystable: return "strictly-semistable";
    }
    return "?";
}

StabilityClass stability_from_string(const std::string& s) {
    for (auto c : {StabilityClass::Unstable, StabilityClass::Stable, StabilityClass::PolystableNotStable,
                   StabilityClass::SemistableNotPolystable})
        if (to_string(c) == s) return c;
    throw std::invalid_argument("unknown stability class '" + s + "'");
}

namespace {

struct Pt {
    long x, y;
    bool operator<(const Pt& o) const { return x != o.x ? x < o.x : y < o.y; }
    bool operator==(const Pt& o) const { return x == o.x && y == o.y; }
};

long cross(const Pt& o, const Pt& a, const Pt& b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

// Counter-clockwise hull without collinear points.
std::vector<Pt> hull(std::vector<Pt> p) {
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
    if (p.size() < 3) return p;
    std::vector<Pt> h(2 * p.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
        h[k++] = p[i];
    }
    for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
        h[k++] = p[i];
    }
    h.resize(k - 1);
    return h;
}

}  // namespace

StabilityClass classify(const TorusAction& a, const Support& s) {
    a.validate();
    if (s.empty()) throw std::invalid_argument("classify: empty support");
    std::size_t d = a.rank();
    std::vector<Pt> pts;
    for (auto i : s) {
        if (i >= a.coords.size()) throw std::invalid_argument("classify: support index out of range");
        const auto& w = a.weights[i];
        pts.push_back({d > 0 ? w[0] : 0, d > 1 ? w[1] : 0});
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const Pt O{0, 0};

    // Affine hull dimension.
    std::size_t k = 0;
    if (pts.size() > 1) {
        k = 1;
        for (std::size_t i = 2; i < pts.size(); ++i)
            if (cross(pts[0], pts[1], pts[i]) != 0) k = 2;
    }

    if (k == 0) return pts[0] == O ? StabilityClass::PolystableNotStable : StabilityClass::Unstable;

    if (k == 1) {
        // Sorted lexicographically, so the extremes of a segment are front and back.
        const Pt &A = pts.front(), &B = pts.back();
        if (cross(A, B, O) != 0) return StabilityClass::Unstable;
        long dot = (O.x - A.x) * (B.x - A.x) + (O.y - A.y) * (B.y - A.y);
        long len = (B.x - A.x) * (B.x - A.x) + (B.y - A.y) * (B.y - A.y);
        if (dot < 0 || dot > len) return StabilityClass::Unstable;
        if (dot == 0 || dot == len) return StabilityClass::SemistableNotPolystable;
        return d == 1 ? StabilityClass::Stable : StabilityClass::PolystableNotStable;
    }

    auto h = hull(pts);
    bool boundary = false;
    for (std::size_t i = 0; i < h.size(); ++i) {
        long c = cross(h[i], h[(i + 1) % h.size()], O);
        if (c < 0) return StabilityClass::Unstable;
        if (c == 0) boundary = true;
    }
    return boundary ? StabilityClass::SemistableNotPolystable : StabilityClass::Stable;
}

std::string support_name(const TorusAction& a, const Support& s) {
    std::string r = "{";
    for (std::size_t i = 0; i < s.size(); ++i) r += (i ? "," : "") + a.coords[s[i]];
    return r + "}";
}

ClassTable enumerate_classification(const TorusAction& a, const std::map<Support, std::string>& notes) {
    a.validate();
    std::size_t n = a.coords.size();
    if (n > 20) throw std::invalid_argument("enumerate_classification: too many coordinates");
    std::vector<Support> all;
    for (unsigned long mask = 1; mask < (1UL << n); ++mask) {
        Support s;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1UL << i)) s.push_back(i);
        all.push_back(std::move(s));
    }
    std::sort(all.begin(), all.end(), [](const Support& x, const Support& y) {
        return x.size() != y.size() ? x.size() < y.size() : x < y;
    });
    ClassTable t;
    for (auto& s : all) {
        auto c = classify(a, s);
        auto it = notes.find(s);
        t.rows.push_back({s, c, it == notes.end() ? "" : it->second});
        ++t.counts[c];
    }
    return t;
}

std::vector<std::vector<int>> invariant_monomials(const TorusAction& a, int max_degree, int min_degree) {
    a.validate();
    std::size_t n = a.coords.size(), d = a.rank();
    std::vector<std::vector<int>> out;
    std::vector<int> e(n, 0);
    std::vector<long> acc(d, 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
        if (i == n) {
            int deg = max_degree - left;
            if (deg >= min_degree && std::all_of(acc.begin(), acc.end(), [](long x) { return x == 0; }))
                out.push_back(e);
            return;
        }
        for (int k = 0; k <= left; ++k) {
            e[i] = k;
            for (std::size_t j = 0; j < d; ++j) acc[j] += k * a.weights[i][j];
            rec(i + 1, left - k);
            for (std::size_t j = 0; j < d; ++j) acc[j] -= k * a.weights[i][j];
        }
        e[i] = 0;
    };
    rec(0, max_degree);
    std::sort(out.begin(), out.end(), [](const std::vector<int>& x, const std::vector<int>& y) {
        int dx = 0, dy = 0;
        for (int v : x) dx += v;
        for (int v : y) dy += v;
        return dx != dy ? dx < dy : x > y;
    });
    return out;
}

std::vector<Rational> quotient_coords(const std::vector<Poly>& map, const VarValues& point) {
    std::vector<Rational> v;
    for (const auto& p : map) v.push_back(p.evaluate(point));
    auto it = std::find_if(v.begin(), v.end(), [](const Rational& x) { return !x.is_zero(); });
    if (it == v.end()) throw std::domain_error("quotient_coords: all components vanish");
    Rational s = it->inverse();
    for (auto& x : v) x *= s;
    return v;
}

bool verify_action_samples(const PolyMatrix& matrix_template, const std::vector<std::string>& params,
                           const RatMatrix& basis_change, const std::vector<ClaimedEntry>& claimed,
                           const std::vector<std::vector<Rational>>& samples, std::string* why) {
    auto say = [&](const std::string& m) {
        if (why) *why = m;
        return false;
    };
    std::size_t n = matrix_template.rows();
    if (!matrix_template.square() || basis_change.rows() != n || basis_change.cols() != n || claimed.size() != n)
        throw std::invalid_argument("verify_action_samples: dimension mismatch");
    RatMatrix Binv = inverse(basis_change);  // throws if singular
    for (const auto& smp : samples) {
        if (smp.size() != params.size()) throw std::invalid_argument("verify_action_samples: sample arity");
        VarValues at;
        for (std::size_t i = 0; i < params.size(); ++i) {
            if (smp[i].is_zero()) throw std::invalid_argument("verify_action_samples: zero sample");
            at[params[i]] = smp[i];
        }
        RatMatrix C = basis_change * specialize(matrix_template, at) * Binv;
        std::string where = "sample (";
        for (std::size_t i = 0; i < smp.size(); ++i) where += (i ? "," : "") + smp[i].str();
        where += ")";
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j && !C(i, j).is_zero()) return say(where + ": conjugated matrix not diagonal");
        std::optional<Rational> scalar;
        for (std::size_t i = 0; i < n; ++i) {
            Rational c = claimed[i].coeff;
            for (std::size_t k = 0; k < params.size() && k < claimed[i].exps.size(); ++k)
                c *= smp[k].pow(claimed[i].exps[k]);
            if (c.is_zero()) return say("claimed entry is zero");
            Rational r = C(i, i) / c;
            if (!scalar) scalar = r;
            else if (*scalar != r) return say(where + ": diagonal entry " + std::to_string(i) + " off the claimed weight");
        }
    }
    return true;
}

}  // namespace kst
