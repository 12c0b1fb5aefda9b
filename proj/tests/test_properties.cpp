#include <doctest.h>

#include "support/properties.hpp"

#include <filesystem>

using namespace kst::props;

namespace {

constexpr std::uint64_t kSeed = 20240917;
constexpr std::size_t kCases = 1000;

void expect(const PropertyResult& r) {
    INFO(r.name << ": " << r.first_failure);
    CHECK(r.cases >= kCases);
    CHECK(r.failures == 0);
}

}  // namespace

TEST_CASE("rational field axioms") { expect(rational_field(kSeed, kCases)); }

TEST_CASE("integral additivity") { expect(integral_additivity(kSeed, kCases)); }

TEST_CASE("intersection forms") { expect(intersection_forms(kSeed, kCases)); }

TEST_CASE("Zariski post-conditions") { expect(zariski_postconditions(kSeed, kCases)); }

TEST_CASE("GIT partition and invariance") { expect(git_partition(kSeed, kCases)); }

TEST_CASE("report determinism") {
    expect(report_determinism(kSeed, kCases, std::filesystem::temp_directory_path()));
}
