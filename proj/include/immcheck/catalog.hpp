#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "immcheck/conditions.hpp"
#include "immcheck/expr.hpp"
#include "immcheck/geometry.hpp"

namespace immcheck {

/// What the checkers must report for a catalog entry under default
/// tolerances; enforced by the test suite.
struct CatalogExpectation {
    Verdict verdict = Verdict::Satisfied;
    std::map<std::string, double> constants;
    std::optional<TorusBranch> branch;
};

/// A ready-to-check instance of a catalog family.
struct CatalogInstance {
    std::string id;
    std::map<std::string, double> params; // resolved instantiation parameters
    std::string source;                   // generated immersion source text
    ImmersionSpec spec;
    std::optional<FrameSplit> frame;      // default split, when one applies
    std::map<CheckKind, CatalogExpectation> expected;
};

struct CatalogEntryInfo {
    std::string id;
    std::string summary;
    std::map<std::string, double> default_params;
};

/// Positive root of b^2 = a^2 (n - a^2) / (n (a^2 - n + 1)), the coefficient
/// that makes the flat-direction family minimal; requires
/// sqrt(n-1) < a <= sqrt(n) and returns 0 at a^2 = n.
double solve_b(int n, double a);

const std::vector<CatalogEntryInfo>& catalog_entries();

/// Build the named entry with the given parameters (missing ones default).
CatalogInstance instantiate(const std::string& id,
                            const std::map<std::string, double>& params = {});

} // namespace immcheck
