#pragma once

#include <cstdint>
#include <optional>

#include "immcheck/conditions.hpp"

namespace immcheck {

/// Deterministic sampling plan for a chart domain. Uniform-random points are
/// keyed by (seed, index), so the list is independent of evaluation order and
/// the first k points of a larger plan equal the k-point plan.
struct SamplePlan {
    enum class Strategy { UniformRandom, Grid };

    std::uint64_t seed = 0;
    int count = 200;
    double margin = 0.05; // fractional inset from each box edge, in [0, 0.5)
    Strategy strategy = Strategy::UniformRandom;
};

const char* to_string(SamplePlan::Strategy s);

std::vector<Eigen::VectorXd> generate_samples(
    const SamplePlan& plan, const std::vector<std::pair<double, double>>& box);

struct InputProvenance {
    std::string kind;                     // "catalog" or "file"
    std::string name;                     // catalog id or file path
    std::map<std::string, double> params; // resolved parameters
    std::string sha256;                   // hash of the immersion source bytes
};

struct FrameDescription {
    std::string kind = "none"; // "none", "cylinder" or "torus"
    int n = 0;
    int k = 0;
    bool standard_basis = true;
};

/// Full record of one check run; serializes losslessly to JSON and to a
/// human-readable summary ending in the verdict line.
struct CheckReport {
    std::string engine_version;
    InputProvenance input;
    FrameDescription frame;
    SamplePlan plan;
    double tol_check = 0.0;
    double tol_const = 0.0;
    ConditionResult result;
    std::map<std::string, double> identity_residuals;
};

bool operator==(const SamplePlan&, const SamplePlan&);
bool operator==(const InputProvenance&, const InputProvenance&);
bool operator==(const FrameDescription&, const FrameDescription&);
bool operator==(const ConditionResult&, const ConditionResult&);
bool operator==(const CheckReport&, const CheckReport&);

/// Generate samples, run the requested checker and assemble the report.
CheckReport run_check(CheckKind kind, const ImmersionSpec& spec,
                      const std::optional<FrameSplit>& frame, const SamplePlan& plan,
                      const CheckTolerances& tols, InputProvenance input);

enum class ReportFormat { Json, Text };

std::string write_report(const CheckReport& report, ReportFormat format);
CheckReport read_report_json(const std::string& json_text);

} // namespace immcheck
