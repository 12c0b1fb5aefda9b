#pragma once

#include "kst/matrix.hpp"
#include "kst/poly.hpp"

#include <map>
#include <string>
#include <vector>

namespace kst {

struct TorusAction {
    std::vector<std::string> coords;
    std::vector<std::vector<long>> weights;  // one vector per coordinate, all of length rank()

    std::size_t rank() const { return weights.empty() ? 0 : weights[0].size(); }
    std::size_t index(const std::string& name) const;
    void validate() const;
};

enum class StabilityClass { Unstable, Stable, PolystableNotStable, SemistableNotPolystable };

std::string to_string(StabilityClass c);
StabilityClass stability_from_string(const std::string& s);

using Support = std::vector<std::size_t>;  // sorted coordinate indices

// Hilbert-Mumford verdict from the weight hull of the support (rank <= 2).
StabilityClass classify(const TorusAction& a, const Support& s);

struct ClassRow {
    Support support;
    StabilityClass cls;
    std::string note;
};

struct ClassTable {
    std::vector<ClassRow> rows;  // ordered by support size, then lexicographically
    std::map<StabilityClass, std::size_t> counts;
};

// Every nonempty support; `notes` attaches remarks to specific supports.
ClassTable enumerate_classification(const TorusAction& a, const std::map<Support, std::string>& notes = {});

std::string support_name(const TorusAction& a, const Support& s);

// Exponent vectors of weight zero with min_degree <= degree <= max_degree.
std::vector<std::vector<int>> invariant_monomials(const TorusAction& a, int max_degree, int min_degree = 1);

// Evaluates the map and rescales so that the first nonzero entry is 1.
std::vector<Rational> quotient_coords(const std::vector<Poly>& map, const VarValues& point);

// Diagonal entry claimed for one eigen-coordinate: coeff * lambda^e[0] * mu^e[1] ...
struct ClaimedEntry {
    Rational coeff = 1;
    std::vector<int> exps;
};

// True iff B*M(t)*B^-1 is diagonal at every sample with diagonal entries equal
// to the claimed monomials up to one scalar per sample.
bool verify_action_samples(const PolyMatrix& matrix_template, const std::vector<std::string>& params,
                           const RatMatrix& basis_change, const std::vector<ClaimedEntry>& claimed,
                           const std::vector<std::vector<Rational>>& samples, std::string* why = nullptr);

}  // namespace kst
