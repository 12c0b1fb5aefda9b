#pragma once

#include <json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kst {

using json = nlohmann::json;

constexpr int kSchemaVersion = 1;

struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Both readings of a value the source states inconsistently.
struct FlaggedReading {
    std::string reason;
    json paper_reading, alt_reading;
};

struct Scenario {
    std::string id, kind, provenance;
    json inputs;
    std::optional<json> expected;  // absent for exploratory runs
    std::optional<FlaggedReading> flag;
    std::filesystem::path dir;  // relative model paths resolve here
    std::string source;         // file name, if loaded from disk
};

const std::vector<std::string>& scenario_kinds();

Scenario parse_scenario(const json& j, const std::filesystem::path& dir = {});
Scenario load_scenario(const std::filesystem::path& file);

enum class Verdict { Match, Mismatch, Flagged, Computed };
std::string to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

struct ScenarioResult {
    std::string id, kind, provenance, source;
    std::string computed, expected;
    Verdict verdict = Verdict::Mismatch;
    std::string note;
    std::vector<std::string> trace;
};

// Computation errors become a mismatch carrying the message; malformed
// inputs throw SchemaError.
ScenarioResult run_scenario(const Scenario& sc);

struct Report {
    std::vector<ScenarioResult> results;  // ordered by id

    std::map<Verdict, std::size_t> counts() const;
    bool ok() const;  // no mismatch
};

// Every *.json file directly inside dir. Files that fail to load are recorded
// as mismatches.
Report verify_all(const std::filesystem::path& dir, unsigned threads = 1);

std::string render_table(const Report& r, bool with_trace = false);
json to_json(const Report& r);
Report report_from_json(const json& j);

}  // namespace kst
