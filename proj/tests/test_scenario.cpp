#include <doctest.h>

#include "kst/scenario.hpp"

#include <fstream>

using namespace kst;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    fs::path d = fs::temp_directory_path() / ("kst-test-" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

void write(const fs::path& p, const json& j) { std::ofstream(p) << j.dump(2); }

json fujita(const std::string& id, const std::string& expected) {
    return {{"schema", 1},
            {"id", id},
            {"kind", "fujita"},
            {"provenance", "unit test"},
            {"inputs",
             {{"model",
               {{"basis", {"H", "E1", "E2"}},
                {"triples", {{"H", "H", "H", 2}, {"E1", "E1", "E1", -4}, {"E2", "E2", "E2", -4},
                             {"H", "E1", "E1", -2}, {"H", "E2", "E2", -2}}},
                {"D", "(3 - u) H - (1 - u) E1 - E2"},
                {"breaks", {0, 1, 2}},
                {"N", {0, "(u - 1) E1"}},
                {"curves", {{{"name", "f1"}, {"pairing", {{"E1", -1}}}}}}}},
              {"output", "S"}}},
            {"expected", expected}};
}

}  // namespace

TEST_CASE("empty directory gives an empty, successful report") {
    auto d = fresh_dir("empty");
    auto r = verify_all(d, 3);
    CHECK(r.results.empty());
    CHECK(r.ok());
    fs::remove_all(d);
}

TEST_CASE("a perturbation of 1/1000000 is exactly one mismatch") {
    auto d = fresh_dir("perturb");
    write(d / "a.json", fujita("a", "3/4"));
    write(d / "b.json", fujita("b", "750001/1000000"));
    write(d / "c.json", fujita("c", "3/4"));
    auto r = verify_all(d, 2);
    REQUIRE(r.results.size() == 3);
    CHECK(r.counts()[Verdict::Mismatch] == 1);
    CHECK(r.results[1].id == "b");
    CHECK(r.results[1].verdict == Verdict::Mismatch);
    CHECK_FALSE(r.ok());
    fs::remove_all(d);
}

TEST_CASE("schema errors name the missing field") {
    json j = fujita("x", "3/4");
    j.erase("kind");
    try {
        parse_scenario(j, ".");
        FAIL("no schema error");
    } catch (const SchemaError& e) {
        CHECK(std::string(e.what()).find("'kind'") != std::string::npos);
    }
    json v = fujita("x", "3/4");
    v["schema"] = 2;
    CHECK_THROWS_AS(parse_scenario(v, "."), SchemaError);
    json both = fujita("x", "3/4");
    both["flag"] = {{"reason", "r"}, {"paper_reading", "1"}, {"alt_reading", "2"}};
    CHECK_THROWS_AS(parse_scenario(both, "."), SchemaError);
    json decimal = fujita("x", "3/4");
    decimal["inputs"]["model"]["breaks"] = {0, 0.5, 2};
    CHECK_THROWS_AS(run_scenario(parse_scenario(decimal, ".")), SchemaError);
}

TEST_CASE("flag verdicts") {
    json j = fujita("f", "3/4");
    j.erase("expected");
    j["flag"] = {{"reason", "typo"}, {"paper_reading", "3/5"}, {"alt_reading", "3/4"}};
    auto r = run_scenario(parse_scenario(j, "."));
    CHECK(r.verdict == Verdict::Flagged);
    CHECK(r.note.find("alternative reading") != std::string::npos);
    j["flag"]["alt_reading"] = "1/2";
    CHECK(run_scenario(parse_scenario(j, ".")).verdict == Verdict::Mismatch);
    j.erase("flag");
    CHECK(run_scenario(parse_scenario(j, ".")).verdict == Verdict::Computed);
}

TEST_CASE("duplicate ids and broken files are recorded, not thrown") {
    auto d = fresh_dir("dup");
    write(d / "a.json", fujita("same", "3/4"));
    write(d / "b.json", fujita("same", "3/4"));
    std::ofstream(d / "c.json") << "{ not json";
    auto r = verify_all(d, 1);
    CHECK(r.counts()[Verdict::Mismatch] >= 2);
    fs::remove_all(d);
}

TEST_CASE("json report round trip") {
    auto d = fresh_dir("round");
    write(d / "a.json", fujita("a", "3/4"));
    auto r = verify_all(d, 1);
    CHECK(render_table(report_from_json(to_json(r)), true) == render_table(r, true));
    fs::remove_all(d);
}
