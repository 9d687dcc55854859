#include "immcheck/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "immcheck/catalog.hpp"
#include "immcheck/report.hpp"
#include "immcheck/sha256.hpp"
#include "immcheck/version.hpp"

namespace immcheck {

namespace {

constexpr int kExitUsage = 3;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

int verdict_exit_code(Verdict v) {
    switch (v) {
        case Verdict::Satisfied: return 0;
        case Verdict::Violated: return 1;
        case Verdict::Degenerate: return 2;
    }
    return kExitUsage;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot read file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::map<std::string, double> parse_param_flags(const std::vector<std::string>& raw) {
    std::map<std::string, double> out;
    for (const auto& item : raw) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0)
            throw Error("--param expects name=value, got '" + item + "'");
        const std::string name = item.substr(0, eq);
        char* end = nullptr;
        const std::string value_text = item.substr(eq + 1);
        const double value = std::strtod(value_text.c_str(), &end);
        if (end == value_text.c_str() || *end != '\0')
            throw Error("--param " + name + ": '" + value_text + "' is not a number");
        out[name] = value;
    }
    return out;
}

// Frame matrix files hold N rows of N reals; row i is the frame vector E_i.
Eigen::MatrixXd load_frame_matrix(const std::string& path, int N) {
    std::istringstream in(read_file(path));
    std::vector<double> values;
    double v = 0.0;
    while (in >> v) values.push_back(v);
    if (static_cast<int>(values.size()) != N * N)
        throw Error("frame file '" + path + "' holds " + std::to_string(values.size()) +
                    " numbers, expected " + std::to_string(N * N));
    Eigen::MatrixXd E(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) E(j, i) = values[static_cast<std::size_t>(i) * N + j];
    return E;
}

struct CheckOptions {
    std::string kind_name;
    std::string catalog_id;
    std::string file_path;
    std::vector<std::string> param_flags;
    int frame_n = -1;
    int frame_k = -1;
    std::string frame_path;
    int samples = 200;
    std::uint64_t seed = 0;
    double margin = 0.05;
    bool grid = false;
    double tol = 1e-8;
    double tol_const = 1e-8;
    std::string report_path;
    std::string format = "json";
};

struct LoadedInput {
    ImmersionSpec spec;
    std::optional<FrameSplit> default_frame;
    InputProvenance provenance;
};

LoadedInput load_input(const CheckOptions& opt) {
    LoadedInput in;
    const std::map<std::string, double> params = parse_param_flags(opt.param_flags);
    if (!opt.catalog_id.empty()) {
        CatalogInstance inst = instantiate(opt.catalog_id, params);
        in.spec = std::move(inst.spec);
        in.default_frame = std::move(inst.frame);
        in.provenance = {"catalog", inst.id, inst.params, sha256_hex(inst.source)};
    } else {
        const std::string source = read_file(opt.file_path);
        in.spec = parse(source);
        for (const auto& [name, value] : params) in.spec.set_param(name, value);
        in.provenance = {"file", opt.file_path, in.spec.params, sha256_hex(source)};
    }
    return in;
}

CheckKind parse_kind(const std::string& name) {
    if (name == "sphere") return CheckKind::Sphere;
    if (name == "cylinder") return CheckKind::Cylinder;
    if (name == "torus") return CheckKind::Torus;
    throw Error("unknown check kind '" + name + "'");
}

std::optional<FrameSplit> resolve_frame(CheckKind kind, const CheckOptions& opt,
                                        const LoadedInput& in) {
    if (kind == CheckKind::Sphere) return std::nullopt;

    int n = opt.frame_n, k = opt.frame_k;
    if ((n >= 0) != (k >= 0))
        throw Error("--n and --k must be given together");
    if (n < 0) {
        const auto expected_kind = kind == CheckKind::Cylinder ? FrameSplit::Kind::Cylinder
                                                               : FrameSplit::Kind::Torus;
        if (in.default_frame && in.default_frame->kind == expected_kind &&
            opt.frame_path.empty())
            return in.default_frame;
        if (in.default_frame && in.default_frame->kind == expected_kind) {
            n = in.default_frame->n;
            k = in.default_frame->k;
        } else {
            throw Error("this input has no default " +
                        std::string(to_string(kind)) + " split; pass --n and --k");
        }
    }

    Eigen::MatrixXd E;
    if (!opt.frame_path.empty()) {
        E = load_frame_matrix(opt.frame_path, in.spec.N);
    } else {
        E = Eigen::MatrixXd::Identity(in.spec.N, in.spec.N);
    }
    return kind == CheckKind::Cylinder ? FrameSplit::cylinder(n, k, std::move(E))
                                       : FrameSplit::torus(n, k, std::move(E));
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file)
        throw Error("cannot write '" + path + "'");
    file << text;
}

int run_check_command(const CheckOptions& opt, std::ostream& out) {
    const CheckKind kind = parse_kind(opt.kind_name);
    const LoadedInput in = load_input(opt);
    const std::optional<FrameSplit> frame = resolve_frame(kind, opt, in);

    SamplePlan plan;
    plan.seed = opt.seed;
    plan.count = opt.samples;
    plan.margin = opt.margin;
    plan.strategy = opt.grid ? SamplePlan::Strategy::Grid : SamplePlan::Strategy::UniformRandom;

    const CheckTolerances tols{opt.tol, opt.tol_const};
    const CheckReport report = run_check(kind, in.spec, frame, plan, tols, in.provenance);
    emit(write_report(report, opt.format == "text" ? ReportFormat::Text : ReportFormat::Json),
         opt.report_path, out);
    return verdict_exit_code(report.result.verdict);
}

int run_catalog_command(const std::string& action, const std::string& id, std::ostream& out) {
    if (action == "list") {
        for (const auto& info : catalog_entries()) {
            CatalogInstance inst = instantiate(info.id);
            out << info.id << "  dim " << inst.spec.m << " -> " << inst.spec.N;
            if (!info.default_params.empty()) {
                out << "  params:";
                for (const auto& [k, v] : info.default_params) out << " " << k << "=" << fmt(v);
            }
            out << "  expected:";
            for (const auto& [kind, exp] : inst.expected)
                out << " " << to_string(kind) << "=" << to_string(exp.verdict);
            out << "  (" << info.summary << ")\n";
        }
        return 0;
    }
    // show <id>
    CatalogInstance inst = instantiate(id);
    out << "id: " << inst.id << "\n";
    for (const auto& info : catalog_entries())
        if (info.id == id) out << "summary: " << info.summary << "\n";
    out << "dim: " << inst.spec.m << " -> " << inst.spec.N << "\n";
    if (!inst.params.empty()) {
        out << "params:";
        for (const auto& [k, v] : inst.params) out << " " << k << "=" << fmt(v);
        out << "\n";
    }
    if (inst.frame) {
        out << "frame: "
            << (inst.frame->kind == FrameSplit::Kind::Cylinder ? "cylinder" : "torus")
            << " split n=" << inst.frame->n << " k=" << inst.frame->k << "\n";
    }
    for (const auto& [kind, exp] : inst.expected) {
        out << "expected " << to_string(kind) << ": " << to_string(exp.verdict);
        for (const auto& [k, v] : exp.constants) out << " " << k << "=" << fmt(v);
        if (exp.branch) out << " branch=" << to_string(*exp.branch);
        out << "\n";
    }
    out << "source:\n" << inst.source;
    return 0;
}

struct SweepOptions {
    std::string catalog_id;
    std::vector<std::string> param_flags;
    std::string sweep_name = "a";
    std::vector<double> values;
    double from = 0.0, to = 0.0;
    int steps = 0;
    std::string kind_name; // empty = infer from the entry's default frame
    int samples = 200;
    std::uint64_t seed = 0;
    double margin = 0.05;
    double tol = 1e-8;
    double tol_const = 1e-8;
    std::string report_path;
};

int run_sweep_command(const SweepOptions& opt, std::ostream& out) {
    std::vector<double> values = opt.values;
    if (values.empty()) {
        if (opt.steps < 2)
            throw Error("sweep needs --values or --from/--to/--steps with steps >= 2");
        for (int i = 0; i < opt.steps; ++i)
            values.push_back(opt.from +
                             (opt.to - opt.from) * static_cast<double>(i) /
                                 static_cast<double>(opt.steps - 1));
    }

    const std::map<std::string, double> fixed = parse_param_flags(opt.param_flags);
    SamplePlan plan;
    plan.seed = opt.seed;
    plan.count = opt.samples;
    plan.margin = opt.margin;
    const CheckTolerances tols{opt.tol, opt.tol_const};

    std::string csv = "param,b,residual_max,c,verdict\n";
    bool all_satisfied = true;
    for (double v : values) {
        std::map<std::string, double> params = fixed;
        params[opt.sweep_name] = v;
        std::string row = fmt(v) + ",";
        try {
            CatalogInstance inst = instantiate(opt.catalog_id, params);
            CheckKind kind;
            if (!opt.kind_name.empty()) {
                kind = parse_kind(opt.kind_name);
            } else if (inst.frame) {
                kind = inst.frame->kind == FrameSplit::Kind::Cylinder ? CheckKind::Cylinder
                                                                      : CheckKind::Torus;
            } else {
                kind = CheckKind::Sphere;
            }
            InputProvenance prov{"catalog", inst.id, inst.params, sha256_hex(inst.source)};
            const CheckReport report =
                run_check(kind, inst.spec, inst.frame, plan, tols, prov);
            const auto b = inst.params.find("b");
            row += (b != inst.params.end() ? fmt(b->second) : "") + ",";
            row += fmt(report.result.residual_max) + ",";
            const auto c = report.result.recovered.find("c");
            row += (c != report.result.recovered.end() ? fmt(c->second) : "") + ",";
            row += to_string(report.result.verdict);
            if (report.result.verdict != Verdict::Satisfied) all_satisfied = false;
        } catch (const OutOfRange&) {
            row += ",,,OutOfRange";
            all_satisfied = false;
        }
        csv += row + "\n";
    }
    emit(csv, opt.report_path, out);
    return all_satisfied ? 0 : 1;
}

} // namespace

int cli_run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectral checks for minimal immersions into spheres, cylinders and "
                 "products of spheres"};
    app.set_version_flag("--version", kEngineVersion);
    app.require_subcommand(1);

    CheckOptions check;
    auto* check_cmd = app.add_subcommand(
        "check", "Run one condition check on a catalog entry or an immersion file");
    check_cmd->add_option("kind", check.kind_name, "Condition to check")
        ->required()
        ->check(CLI::IsMember({"sphere", "cylinder", "torus"}));
    auto* cat_opt = check_cmd->add_option("--catalog", check.catalog_id, "Catalog entry id");
    auto* file_opt = check_cmd->add_option("--file", check.file_path, "Immersion source file");
    cat_opt->excludes(file_opt);
    file_opt->excludes(cat_opt);
    check_cmd->add_option("--param", check.param_flags, "Parameter binding name=value");
    check_cmd->add_option("--n", check.frame_n, "Sphere-factor dimension of the split");
    check_cmd->add_option("--k", check.frame_k, "Second-factor dimension of the split");
    check_cmd->add_option("--frame", check.frame_path,
                          "Frame matrix file (N rows of N reals; row i is E_i)");
    check_cmd->add_option("--samples", check.samples, "Sample count")->capture_default_str();
    check_cmd->add_option("--seed", check.seed, "Sampling seed")->capture_default_str();
    check_cmd->add_option("--margin", check.margin, "Fractional box inset")
        ->capture_default_str();
    check_cmd->add_flag("--grid", check.grid, "Grid sampling instead of uniform random");
    check_cmd->add_option("--tol", check.tol, "Residual tolerance")->capture_default_str();
    check_cmd->add_option("--tol-const", check.tol_const, "Constant-spread tolerance")
        ->capture_default_str();
    check_cmd->add_option("--report", check.report_path, "Write the report to this path");
    check_cmd->add_option("--format", check.format, "Report format")
        ->check(CLI::IsMember({"json", "text"}))
        ->capture_default_str();

    std::string catalog_action, catalog_id;
    auto* catalog_cmd = app.add_subcommand("catalog", "List or show built-in immersions");
    catalog_cmd->add_option("action", catalog_action, "'list' or 'show'")
        ->required()
        ->check(CLI::IsMember({"list", "show"}));
    catalog_cmd->add_option("id", catalog_id, "Entry id for 'show'");

    int solve_n = 0;
    double solve_a = 0.0;
    auto* solve_cmd = app.add_subcommand(
        "solve-b", "Solve for the flat-direction coefficient of the example34 family");
    solve_cmd->add_option("--n", solve_n, "Number of circle factors")->required();
    solve_cmd->add_option("--a", solve_a, "Frequency a with sqrt(n-1) < a <= sqrt(n)")
        ->required();

    SweepOptions sweep;
    auto* sweep_cmd =
        app.add_subcommand("sweep", "Check a catalog family over a parameter range (CSV)");
    sweep_cmd->add_option("--catalog", sweep.catalog_id, "Catalog entry id")->required();
    sweep_cmd->add_option("--param", sweep.param_flags, "Fixed parameter name=value");
    sweep_cmd->add_option("--sweep-param", sweep.sweep_name, "Swept parameter name")
        ->capture_default_str();
    sweep_cmd->add_option("--values", sweep.values, "Comma-separated parameter values")
        ->delimiter(',');
    sweep_cmd->add_option("--from", sweep.from, "Range start");
    sweep_cmd->add_option("--to", sweep.to, "Range end");
    sweep_cmd->add_option("--steps", sweep.steps, "Number of range steps");
    sweep_cmd->add_option("--kind", sweep.kind_name, "Check kind (default: from the entry)")
        ->check(CLI::IsMember({"sphere", "cylinder", "torus"}));
    sweep_cmd->add_option("--samples", sweep.samples, "Sample count")->capture_default_str();
    sweep_cmd->add_option("--seed", sweep.seed, "Sampling seed")->capture_default_str();
    sweep_cmd->add_option("--margin", sweep.margin, "Fractional box inset")
        ->capture_default_str();
    sweep_cmd->add_option("--tol", sweep.tol, "Residual tolerance")->capture_default_str();
    sweep_cmd->add_option("--tol-const", sweep.tol_const, "Constant-spread tolerance")
        ->capture_default_str();
    sweep_cmd->add_option("--report", sweep.report_path, "Write the CSV to this path");

    try {
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << kEngineVersion << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (check_cmd->parsed()) {
            if (check.catalog_id.empty() == check.file_path.empty())
                throw Error("pass exactly one of --catalog or --file");
            return run_check_command(check, out);
        }
        if (catalog_cmd->parsed()) {
            if (catalog_action == "show" && catalog_id.empty())
                throw Error("catalog show needs an entry id");
            return run_catalog_command(catalog_action, catalog_id, out);
        }
        if (solve_cmd->parsed()) {
            out << "b = " << fmt(solve_b(solve_n, solve_a)) << "\n";
            return 0;
        }
        if (sweep_cmd->parsed()) return run_sweep_command(sweep, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    err << "error: no subcommand\n";
    return kExitUsage;
}

} // namespace immcheck
