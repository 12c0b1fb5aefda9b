// Acceptance run: one PASS/FAIL line per criterion.
//
// Exit status is 0 iff the set of failing criteria equals the --expect-fail set.

#include "support/properties.hpp"

#include "kst/scenario.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <iostream>
#include <set>
#include <thread>

using namespace kst;

namespace {

struct Check {
    bool ok = true;
    std::vector<std::string> why;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            why.push_back(what);
        }
    }
};

class Suite {
public:
    explicit Suite(Report r) : report_(std::move(r)) {}

    const ScenarioResult* find(const std::string& id) const {
        for (const auto& r : report_.results)
            if (r.id == id) return &r;
        return nullptr;
    }

    // Scenario exists, has the wanted verdict and (optionally) the wanted computed text.
    void expect(Check& c, const std::string& id, Verdict v = Verdict::Match, const std::string& computed = "") const {
        const auto* r = find(id);
        if (!r) return c.require(false, id + " missing");
        c.require(r->verdict == v, id + " is " + to_string(r->verdict) + (r->note.empty() ? "" : " (" + r->note + ")"));
        if (!computed.empty()) c.require(r->computed == computed, id + " computed " + r->computed);
    }

    void expect_prefix(Check& c, const std::string& prefix, const std::string& computed) const {
        std::size_t n = 0;
        for (const auto& r : report_.results)
            if (r.id.rfind(prefix, 0) == 0) {
                ++n;
                expect(c, r.id, Verdict::Match, computed);
            }
        c.require(n > 0, "no scenario with prefix " + prefix);
    }

    bool trace_has(const std::string& id, const std::string& needle) const {
        const auto* r = find(id);
        if (!r) return false;
        for (const auto& t : r->trace)
            if (t.find(needle) != std::string::npos) return true;
        return false;
    }

private:
    Report report_;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    std::string dir = KST_SCENARIO_DIR;
    std::set<int> expect_fail;
    std::size_t cases = 1000;
    app.add_option("--scenarios", dir, "Scenario directory");
    app.add_option("--expect-fail", expect_fail, "Criteria known to be unattainable");
    app.add_option("--cases", cases, "Randomized cases per property")->check(CLI::PositiveNumber);
    CLI11_PARSE(app, argc, argv);

    auto t0 = std::chrono::steady_clock::now();
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    Suite s(verify_all(dir, threads));
    std::vector<std::pair<std::string, Check>> crit(12);

    {
        auto& [title, c] = crit[0];
        title = "K-instability lemma: beta(F) = -3/52";
        s.expect(c, "beth.k-unstable.beta", Verdict::Match, "-3/52");
    }
    {
        auto& [title, c] = crit[1];
        title = "divisorial S-integrals 21/52, 53/208, 49/104";
        s.expect(c, "cor.divisorial.H", Verdict::Match, "21/52");
        s.expect(c, "cor.divisorial.E", Verdict::Match, "53/208");
        s.expect(c, "cor.divisorial.S", Verdict::Match, "49/104");
    }
    {
        auto& [title, c] = crit[2];
        title = "delta bound: 3/4; 3/4, 99/104; 21/26, 37/52, 99/104; delta >= 104/99";
        s.expect(c, "delta.S", Verdict::Match, "3/4");
        s.expect(c, "delta.Z.W2", Verdict::Match, "3/4");
        s.expect(c, "delta.l1.W2", Verdict::Match, "99/104");
        s.expect(c, "delta.Z.W3", Verdict::Match, "21/26");
        s.expect(c, "delta.l1.W3", Verdict::Match, "37/52");
        s.expect(c, "delta.l1.W3-on-l2", Verdict::Match, "99/104");
        s.expect(c, "delta.bound", Verdict::Match, "104/99");
    }
    {
        auto& [title, c] = crit[3];
        title = "smooth case: 99/52, 5/52, 29/52; schedule passes with integrands 26-2u^3, 24+6u-6u^2, 6(2-u)(4-u)";
        s.expect(c, "hat.S", Verdict::Match, "99/52");
        s.expect(c, "hat.beta", Verdict::Match, "5/52");
        s.expect(c, "hat.Fhat.W2", Verdict::Match, "29/52");
        // The stated third integrand is taken literally; the criterion holds only if it is reproduced.
        const auto* r = s.find("hat.schedule");
        c.require(r && r->computed.rfind("pass", 0) == 0, "hat.schedule does not pass verification");
        c.require(r && r->note.find("reproduces the stated reading") != std::string::npos,
                  "third interval integrand is 6(3-u)(4-u), not 6(2-u)(4-u)");
    }
    {
        auto& [title, c] = crit[4];
        title = "non-isolated beth case: 1/26, 49/104, (2/13)k + 33/104, (49k + 51)/104; 49/54 flagged";
        s.expect(c, "beth-line.F.beta", Verdict::Match, "1/26");
        s.expect(c, "beth-line.Stil.S", Verdict::Match, "49/104");
        s.expect(c, "beth-line.F.W2", Verdict::Match);
        s.expect(c, "beth-line.Stil.W2", Verdict::Match);
        s.expect(c, "beth-line.Stil.S-restated", Verdict::Flagged, "49/104");
    }
    {
        auto& [title, c] = crit[5];
        title = "aleph cases: S(W^S; Z) = 3/4, beta(S) = 3/52";
        s.expect(c, "aleph-two-nodes.W2", Verdict::Match, "3/4");
        s.expect(c, "aleph-cA1.beta", Verdict::Match, "3/52");
    }
    {
        auto& [title, c] = crit[6];
        title = "GIT tables: first quotient families, second quotient without strictly semistable points";
        s.expect(c, "git.first.table");
        s.expect(c, "git.second.table");
        c.require(s.trace_has("git.first.table", "value-dependent"), "value-dependent strata not annotated");
    }
    {
        auto& [title, c] = crit[7];
        title = "invariant monomials: {alpha^2, beta epsilon, gamma delta} and nine generators";
        s.expect(c, "git.first.invariants", Verdict::Match, "3 monomials");
        s.expect(c, "git.second.invariants", Verdict::Match, "9 monomials");
    }
    {
        auto& [title, c] = crit[8];
        title = "conic-bundle discriminants proportional to Delta and Delta_1 Delta_2; Delta_1 ~ Delta_2 at [0:1]";
        s.expect(c, "disc.beth.fibre");
        s.expect(c, "disc.aleph.fibre");
        s.expect(c, "disc.aleph.r0s1");
    }
    {
        auto& [title, c] = crit[9];
        title = "Jacobian rank drops at every listed singular point, full rank at sampled smooth points";
        s.expect_prefix(c, "jac.beth.node", "2");
        s.expect_prefix(c, "jac.aleph.node", "2");
        s.expect(c, "jac.beth.smooth", Verdict::Match, "3");
        s.expect(c, "jac.aleph.smooth", Verdict::Match, "3");
    }
    {
        auto& [title, c] = crit[10];
        title = "oracle reproduces every declared surface schedule";
        for (const char* id : {"delta.Z.W2", "delta.l1.W2", "hat.Fhat.W2", "beth-line.F.W2", "beth-line.Stil.W2",
                               "aleph-two-nodes.W2"}) {
            s.expect(c, id);
            c.require(s.trace_has(id, "reproduced by the oracle"), std::string(id) + ": no declared schedule checked");
        }
    }
    {
        auto& [title, c] = crit[11];
        title = "property suites, >= " + std::to_string(cases) + " randomized cases each";
        for (const auto& p : props::all(20240917, cases, std::filesystem::temp_directory_path())) {
            c.require(p.cases >= 1000, p.name + ": only " + std::to_string(p.cases) + " cases");
            c.require(p.ok(), p.name + ": " + std::to_string(p.failures) + " failures, " + p.first_failure);
        }
    }

    std::set<int> failed;
    for (std::size_t i = 0; i < crit.size(); ++i) {
        const auto& [title, c] = crit[i];
        int n = static_cast<int>(i) + 1;
        std::cout << "criterion " << (n < 10 ? " " : "") << n << ": " << (c.ok ? "PASS" : "FAIL") << "  " << title
                  << "\n";
        for (const auto& w : c.why) std::cout << "              " << w << "\n";
        if (!c.ok) failed.insert(n);
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "elapsed " << secs << " s" << (secs < 60 ? "" : " (over the 60 s budget)") << "\n";
    if (failed != expect_fail) {
        std::cout << "unexpected outcome: failing set differs from --expect-fail\n";
        return 1;
    }
    return secs < 60 ? 0 : 1;
}
