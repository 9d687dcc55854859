#include "immcheck/report.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "immcheck/version.hpp"

namespace immcheck {

namespace {

// splitmix64 finalizer keyed by (seed, counter); no state is carried between
// draws, which is what makes the sample list order-independent.
std::uint64_t mix64(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t z = seed + (counter + 1) * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double to_unit(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

const char* to_string(SamplePlan::Strategy s) {
    return s == SamplePlan::Strategy::UniformRandom ? "uniform_random" : "grid";
}

std::vector<Eigen::VectorXd> generate_samples(
    const SamplePlan& plan, const std::vector<std::pair<double, double>>& box) {
    if (plan.count < 2)
        throw Error("sample plan needs count >= 2");
    if (!(plan.margin >= 0.0 && plan.margin < 0.5))
        throw Error("sample plan margin must lie in [0, 0.5)");
    const int m = static_cast<int>(box.size());
    if (m < 1)
        throw Error("sample plan needs a non-empty domain box");

    std::vector<double> lo(m), width(m);
    for (int d = 0; d < m; ++d) {
        const double span = box[d].second - box[d].first;
        lo[d] = box[d].first + plan.margin * span;
        width[d] = (1.0 - 2.0 * plan.margin) * span;
    }

    std::vector<Eigen::VectorXd> points;
    points.reserve(static_cast<std::size_t>(plan.count));

    if (plan.strategy == SamplePlan::Strategy::UniformRandom) {
        for (int i = 0; i < plan.count; ++i) {
            Eigen::VectorXd p(m);
            for (int d = 0; d < m; ++d) {
                const std::uint64_t counter =
                    static_cast<std::uint64_t>(i) * 256 + static_cast<std::uint64_t>(d);
                p(d) = lo[d] + width[d] * to_unit(mix64(plan.seed, counter));
            }
            points.push_back(std::move(p));
        }
        return points;
    }

    // Grid: per-axis lattice with na points, placed at fraction (digit+1)/(na+1)
    // of the inset box; the first `count` lattice points in row-major order.
    int na = 1;
    while (std::pow(static_cast<double>(na), m) < static_cast<double>(plan.count)) ++na;
    for (int i = 0; i < plan.count; ++i) {
        Eigen::VectorXd p(m);
        int rest = i;
        for (int d = m - 1; d >= 0; --d) {
            const int digit = rest % na;
            rest /= na;
            p(d) = lo[d] + width[d] * (static_cast<double>(digit + 1) /
                                       static_cast<double>(na + 1));
        }
        points.push_back(std::move(p));
    }
    return points;
}

bool operator==(const SamplePlan& a, const SamplePlan& b) {
    return a.seed == b.seed && a.count == b.count && a.margin == b.margin &&
           a.strategy == b.strategy;
}

bool operator==(const InputProvenance& a, const InputProvenance& b) {
    return a.kind == b.kind && a.name == b.name && a.params == b.params &&
           a.sha256 == b.sha256;
}

bool operator==(const FrameDescription& a, const FrameDescription& b) {
    return a.kind == b.kind && a.n == b.n && a.k == b.k &&
           a.standard_basis == b.standard_basis;
}

bool operator==(const ConditionResult& a, const ConditionResult& b) {
    return a.kind == b.kind && a.verdict == b.verdict && a.residual_max == b.residual_max &&
           a.residual_rms == b.residual_rms && a.recovered == b.recovered &&
           a.spread == b.spread && a.branch == b.branch &&
           a.samples_used == b.samples_used && a.note == b.note &&
           a.identity_residuals == b.identity_residuals;
}

bool operator==(const CheckReport& a, const CheckReport& b) {
    return a.engine_version == b.engine_version && a.input == b.input && a.frame == b.frame &&
           a.plan == b.plan && a.tol_check == b.tol_check && a.tol_const == b.tol_const &&
           a.result == b.result && a.identity_residuals == b.identity_residuals;
}

CheckReport run_check(CheckKind kind, const ImmersionSpec& spec,
                      const std::optional<FrameSplit>& frame, const SamplePlan& plan,
                      const CheckTolerances& tols, InputProvenance input) {
    const std::vector<Eigen::VectorXd> samples = generate_samples(plan, spec.domain_box);

    CheckReport report;
    report.engine_version = kEngineVersion;
    report.input = std::move(input);
    report.plan = plan;
    report.tol_check = tols.tol_check;
    report.tol_const = tols.tol_const;

    if (kind == CheckKind::Sphere) {
        report.result = check_sphere(spec, samples, tols);
    } else {
        if (!frame)
            throw Error(std::string(to_string(kind)) + " check needs a frame split");
        report.frame.kind =
            frame->kind == FrameSplit::Kind::Cylinder ? "cylinder" : "torus";
        report.frame.n = frame->n;
        report.frame.k = frame->k;
        report.frame.standard_basis =
            (frame->E - Eigen::MatrixXd::Identity(frame->E.rows(), frame->E.cols()))
                .cwiseAbs()
                .maxCoeff() == 0.0;
        report.result = kind == CheckKind::Cylinder
                            ? check_cylinder(spec, *frame, samples, tols)
                            : check_torus(spec, *frame, samples, tols);
    }
    report.identity_residuals = report.result.identity_residuals;
    return report;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace {

using json = nlohmann::ordered_json;

Verdict verdict_from_string(const std::string& s) {
    if (s == "Satisfied") return Verdict::Satisfied;
    if (s == "Violated") return Verdict::Violated;
    if (s == "Degenerate") return Verdict::Degenerate;
    throw Error("unknown verdict '" + s + "'");
}

CheckKind kind_from_string(const std::string& s) {
    if (s == "sphere") return CheckKind::Sphere;
    if (s == "cylinder") return CheckKind::Cylinder;
    if (s == "torus") return CheckKind::Torus;
    throw Error("unknown check kind '" + s + "'");
}

TorusBranch branch_from_string(const std::string& s) {
    if (s == "SphereMinimal") return TorusBranch::SphereMinimal;
    if (s == "ProductMinimal") return TorusBranch::ProductMinimal;
    throw Error("unknown branch '" + s + "'");
}

SamplePlan::Strategy strategy_from_string(const std::string& s) {
    if (s == "uniform_random") return SamplePlan::Strategy::UniformRandom;
    if (s == "grid") return SamplePlan::Strategy::Grid;
    throw Error("unknown sampling strategy '" + s + "'");
}

json map_to_json(const std::map<std::string, double>& m) {
    json out = json::object();
    for (const auto& [k, v] : m) out[k] = v;
    return out;
}

std::map<std::string, double> map_from_json(const json& j) {
    std::map<std::string, double> out;
    for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = it.value().get<double>();
    return out;
}

} // namespace

std::string write_report(const CheckReport& report, ReportFormat format) {
    if (format == ReportFormat::Json) {
        json j;
        j["engine_version"] = report.engine_version;
        j["input"] = {{"kind", report.input.kind},
                      {"name", report.input.name},
                      {"params", map_to_json(report.input.params)},
                      {"sha256", report.input.sha256}};
        j["frame"] = {{"kind", report.frame.kind},
                      {"n", report.frame.n},
                      {"k", report.frame.k},
                      {"standard_basis", report.frame.standard_basis}};
        j["sample_plan"] = {{"seed", report.plan.seed},
                            {"count", report.plan.count},
                            {"margin", report.plan.margin},
                            {"strategy", to_string(report.plan.strategy)}};
        j["tolerances"] = {{"tol_check", report.tol_check}, {"tol_const", report.tol_const}};
        json res;
        res["kind"] = to_string(report.result.kind);
        res["verdict"] = to_string(report.result.verdict);
        res["branch"] =
            report.result.branch ? json(to_string(*report.result.branch)) : json(nullptr);
        res["residual_max"] = report.result.residual_max;
        res["residual_rms"] = report.result.residual_rms;
        res["samples_used"] = report.result.samples_used;
        res["recovered"] = map_to_json(report.result.recovered);
        res["spread"] = map_to_json(report.result.spread);
        res["note"] = report.result.note;
        j["result"] = res;
        j["identity_residuals"] = map_to_json(report.identity_residuals);
        return j.dump(2) + "\n";
    }

    std::string out;
    out += "immersion check (engine " + report.engine_version + ")\n";
    out += "input: " + report.input.kind + " " + report.input.name +
           (report.input.sha256.empty() ? "" : " (sha256 " + report.input.sha256 + ")") + "\n";
    if (!report.input.params.empty()) {
        out += "params:";
        for (const auto& [k, v] : report.input.params) out += " " + k + "=" + fmt(v);
        out += "\n";
    }
    if (report.frame.kind != "none") {
        out += "frame: " + report.frame.kind + " split n=" + std::to_string(report.frame.n) +
               " k=" + std::to_string(report.frame.k) +
               (report.frame.standard_basis ? " (standard basis)" : " (custom)") + "\n";
    }
    out += "samples: " + std::to_string(report.plan.count) + " " +
           to_string(report.plan.strategy) + ", seed " + std::to_string(report.plan.seed) +
           ", margin " + fmt(report.plan.margin) + "\n";
    out += "tolerances: tol_check=" + fmt(report.tol_check) +
           ", tol_const=" + fmt(report.tol_const) + "\n";
    out += "check: " + std::string(to_string(report.result.kind)) + "\n";
    if (report.result.branch)
        out += "branch: " + std::string(to_string(*report.result.branch)) + "\n";
    out += "residual_max: " + fmt(report.result.residual_max) + "\n";
    out += "residual_rms: " + fmt(report.result.residual_rms) + "\n";
    for (const auto& [k, v] : report.result.recovered) {
        out += "recovered " + k + ": " + fmt(v);
        auto sp = report.result.spread.find(k);
        if (sp != report.result.spread.end()) out += " (spread " + fmt(sp->second) + ")";
        out += "\n";
    }
    out += "identities:\n";
    for (const auto& [k, v] : report.identity_residuals)
        out += "  " + k + ": " + fmt(v) + "\n";
    if (!report.result.note.empty()) out += "note: " + report.result.note + "\n";
    out += "VERDICT: " + std::string(to_string(report.result.verdict)) + "\n";
    return out;
}

CheckReport read_report_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const std::exception& e) {
        throw Error(std::string("report is not valid JSON: ") + e.what());
    }
    try {
        CheckReport r;
        r.engine_version = j.at("engine_version").get<std::string>();
        const auto& in = j.at("input");
        r.input.kind = in.at("kind").get<std::string>();
        r.input.name = in.at("name").get<std::string>();
        r.input.params = map_from_json(in.at("params"));
        r.input.sha256 = in.at("sha256").get<std::string>();
        const auto& fr = j.at("frame");
        r.frame.kind = fr.at("kind").get<std::string>();
        r.frame.n = fr.at("n").get<int>();
        r.frame.k = fr.at("k").get<int>();
        r.frame.standard_basis = fr.at("standard_basis").get<bool>();
        const auto& sp = j.at("sample_plan");
        r.plan.seed = sp.at("seed").get<std::uint64_t>();
        r.plan.count = sp.at("count").get<int>();
        r.plan.margin = sp.at("margin").get<double>();
        r.plan.strategy = strategy_from_string(sp.at("strategy").get<std::string>());
        const auto& tol = j.at("tolerances");
        r.tol_check = tol.at("tol_check").get<double>();
        r.tol_const = tol.at("tol_const").get<double>();
        const auto& res = j.at("result");
        r.result.kind = kind_from_string(res.at("kind").get<std::string>());
        r.result.verdict = verdict_from_string(res.at("verdict").get<std::string>());
        if (!res.at("branch").is_null())
            r.result.branch = branch_from_string(res.at("branch").get<std::string>());
        r.result.residual_max = res.at("residual_max").get<double>();
        r.result.residual_rms = res.at("residual_rms").get<double>();
        r.result.samples_used = res.at("samples_used").get<int>();
        r.result.recovered = map_from_json(res.at("recovered"));
        r.result.spread = map_from_json(res.at("spread"));
        r.result.note = res.at("note").get<std::string>();
        r.identity_residuals = map_from_json(j.at("identity_residuals"));
        r.result.identity_residuals = r.identity_residuals;
        return r;
    } catch (const json::exception& e) {
        throw Error(std::string("report JSON is missing fields: ") + e.what());
    }
}

} // namespace immcheck
