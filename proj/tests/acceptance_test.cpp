// Acceptance suite: end-to-end identity checks at pinned tolerances, one
// pass/fail line per criterion. Returns the number of failed criteria.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "immcheck/catalog.hpp"
#include "immcheck/cli.hpp"
#include "immcheck/report.hpp"
#include "immcheck/sha256.hpp"
#include "test_support.hpp"

using namespace immcheck;

namespace {

int g_failures = 0;
std::vector<std::string> g_notes;

void note(const std::string& msg) { g_notes.push_back(msg); }

void criterion(int number, const std::string& name, const std::function<bool()>& body) {
    g_notes.clear();
    bool ok = false;
    std::string error;
    try {
        ok = body();
    } catch (const std::exception& e) {
        error = e.what();
    }
    if (ok) {
        std::printf("[PASS] criterion %d: %s\n", number, name.c_str());
    } else {
        ++g_failures;
        std::printf("[FAIL] criterion %d: %s\n", number, name.c_str());
        for (const auto& n : g_notes) std::printf("       %s\n", n.c_str());
        if (!error.empty()) std::printf("       exception: %s\n", error.c_str());
    }
}

bool expect(bool cond, const std::string& what) {
    if (!cond) note("failed: " + what);
    return cond;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::vector<Eigen::VectorXd> seeded_samples(const ImmersionSpec& spec, int count,
                                            std::uint64_t seed) {
    SamplePlan plan;
    plan.seed = seed;
    plan.count = count;
    return generate_samples(plan, spec.domain_box);
}

// --- criterion bodies -------------------------------------------------------

bool flat_family_reproduction() {
    const std::vector<std::pair<int, double>> cases = {
        {2, 1.2}, {2, 1.5}, {2, 2.0}, {3, 2.2}, {3, 2.5}, {3, 3.0}};
    bool ok = true;
    for (const auto& [n, a_sq] : cases) {
        const double a = std::sqrt(a_sq);
        const CatalogInstance inst =
            instantiate("example34", {{"n", static_cast<double>(n)}, {"a", a}});
        const double b = inst.params.at("b");
        const auto samples = seeded_samples(inst.spec, 200, 7);
        const ConditionResult res = check_cylinder(inst.spec, *inst.frame, samples);

        const std::string tag = "(n=" + std::to_string(n) + ", a^2=" + fmt(a_sq) + ")";
        ok &= expect(res.verdict == Verdict::Satisfied, tag + " verdict Satisfied");
        ok &= expect(res.residual_max <= 1e-8,
                     tag + " residual_max " + fmt(res.residual_max) + " <= 1e-8");
        ok &= expect(std::abs(res.recovered.at("c") - 1.0) <= 1e-8,
                     tag + " recovered c = 1 +- 1e-8");

        const double a2 = a * a;
        const double t2_pinned = n * b * b / (a2 + n * b * b);
        const double t2_spectral = n - a2;
        for (const auto& p : samples) {
            const GeometryAtPoint geo = geometry_at(inst.spec, p);
            const double t2 = tangent_projection_norms(geo, *inst.frame)(geo.N - 1);
            if (std::abs(t2 - t2_pinned) > 1e-9 || std::abs(t2 - t2_spectral) > 1e-9) {
                ok &= expect(false, tag + " |T|^2 matches both closed forms at " +
                                        fmt(p(0)));
                break;
            }
        }
    }
    return ok;
}

bool classical_takahashi() {
    bool ok = true;
    const CatalogInstance ct = instantiate("clifford_torus");
    const ConditionResult torus_res =
        check_sphere(ct.spec, seeded_samples(ct.spec, 200, 7));
    ok &= expect(torus_res.verdict == Verdict::Satisfied, "clifford torus Satisfied");
    ok &= expect(std::abs(torus_res.recovered.at("c") - 1.0) <= 1e-9,
                 "clifford torus c = 1 +- 1e-9, got " + fmt(torus_res.recovered.at("c")));
    ok &= expect(torus_res.residual_max <= 1e-9,
                 "clifford torus residual " + fmt(torus_res.residual_max) + " <= 1e-9");

    const CatalogInstance sphere = instantiate("round_sphere");
    const ConditionResult sphere_res =
        check_sphere(sphere.spec, seeded_samples(sphere.spec, 200, 7));
    ok &= expect(sphere_res.verdict == Verdict::Satisfied, "unit sphere chart Satisfied");
    ok &= expect(std::abs(sphere_res.recovered.at("c") - 1.0) <= 1e-9,
                 "unit sphere chart c = 1");
    ok &= expect(std::abs(sphere_res.recovered.at("eigen") - 2.0) <= 2e-9,
                 "unit sphere chart eigenvalue m c = 2");
    return ok;
}

bool torus_both_branches() {
    bool ok = true;
    for (const char* id : {"product_circles", "diagonal_circle"}) {
        const CatalogInstance inst = instantiate(id);
        const ConditionResult res =
            check_torus(inst.spec, *inst.frame, seeded_samples(inst.spec, 200, 7));
        ok &= expect(res.verdict == Verdict::Satisfied, std::string(id) + " Satisfied");
        ok &= expect(res.branch && *res.branch == TorusBranch::SphereMinimal,
                     std::string(id) + " takes the SphereMinimal branch");
    }
    const CatalogInstance sp = instantiate("scaled_product", {{"r2", 1.5}});
    const ConditionResult res =
        check_torus(sp.spec, *sp.frame, seeded_samples(sp.spec, 200, 7));
    ok &= expect(res.verdict == Verdict::Violated, "scaled_product(r2=1.5) Violated");
    ok &= expect(res.residual_max >= 0.3, "scaled_product residual " +
                                              fmt(res.residual_max) + " >= 0.3");
    return ok;
}

bool proof_internal_identities() {
    bool ok = true;
    for (const auto& info : catalog_entries()) {
        const CatalogInstance inst = instantiate(info.id);
        const auto samples = seeded_samples(inst.spec, 100, 11);

        double worst_norm_sq = 0.0, worst_completeness = 0.0;
        for (const auto& p : samples) {
            const GeometryAtPoint geo = geometry_at(inst.spec, p);
            const double lap_n2 = laplace_beltrami_scalar(geo, norm_squared_jet(geo));
            const double rhs = 2.0 * (geo.laplace_F.dot(geo.F) + geo.m);
            worst_norm_sq =
                std::max(worst_norm_sq,
                         std::abs(lap_n2 - rhs) / std::max(1.0, std::abs(rhs)));
            const Eigen::VectorXd t2 = tangent_projection_norms(
                geo, Eigen::MatrixXd::Identity(geo.N, geo.N));
            worst_completeness = std::max(worst_completeness, std::abs(t2.sum() - geo.m));
        }
        ok &= expect(worst_norm_sq <= 1e-8, info.id + ": |F|^2 laplacian identity " +
                                                fmt(worst_norm_sq) + " <= 1e-8");
        ok &= expect(worst_completeness <= 1e-10,
                     info.id + ": sum |T_i|^2 = m within 1e-10, got " +
                         fmt(worst_completeness));
    }

    // cylinder-satisfied entries additionally satisfy the flat-sum identity
    // and have constant squared distance to the flat factor
    for (const char* id : {"example34", "right_cylinder", "helix_graph"}) {
        const CatalogInstance inst = instantiate(id);
        const auto samples = seeded_samples(inst.spec, 100, 11);
        const ConditionResult res = check_cylinder(inst.spec, *inst.frame, samples);
        ok &= expect(res.verdict == Verdict::Satisfied, std::string(id) + " Satisfied");
        ok &= expect(res.identity_residuals.at("norm_sq_laplacian_equals_2_flat_sum") <= 1e-8,
                     std::string(id) + ": flat-sum identity <= 1e-8");
        ok &= expect(res.spread.at("r2") <= 1e-10,
                     std::string(id) + ": |P|^2 spread " + fmt(res.spread.at("r2")) +
                         " <= 1e-10");
    }
    return ok;
}

bool differentiation_against_finite_differences() {
    const double h = 1e-5;
    bool ok = true;
    for (const auto& info : catalog_entries()) {
        const CatalogInstance inst = instantiate(info.id);
        const auto samples = seeded_samples(inst.spec, 50, 13);
        double worst_grad = 0.0, worst_hess = 0.0;
        for (const auto& p : samples) {
            const auto jets = eval_chart(inst.spec, p);
            for (int a = 0; a < inst.spec.N; ++a) {
                const Eigen::VectorXd fd_g = testing::fd_gradient(inst.spec, a, p, h);
                const double g_scale =
                    std::max(1.0, jets[a].grad().cwiseAbs().maxCoeff());
                worst_grad = std::max(
                    worst_grad,
                    (jets[a].grad() - fd_g).cwiseAbs().maxCoeff() / g_scale);

                const Eigen::MatrixXd fd_h = testing::fd_hessian(inst.spec, a, p, h);
                const double h_scale =
                    std::max(1.0, jets[a].hess().cwiseAbs().maxCoeff());
                worst_hess = std::max(
                    worst_hess,
                    (jets[a].hess() - fd_h).cwiseAbs().maxCoeff() / h_scale);
            }
        }
        ok &= expect(worst_grad <= 1e-6, info.id + ": gradient vs FD " + fmt(worst_grad) +
                                             " <= 1e-6");
        ok &= expect(worst_hess <= 1e-4, info.id + ": hessian vs FD " + fmt(worst_hess) +
                                             " <= 1e-4");
    }
    return ok;
}

bool negative_controls() {
    bool ok = true;
    const CatalogInstance lat = instantiate("latitude_circle", {{"z0", 0.5}});
    const ConditionResult lat_res =
        check_sphere(lat.spec, seeded_samples(lat.spec, 200, 7));
    ok &= expect(lat_res.verdict == Verdict::Violated, "latitude_circle(0.5) Violated");
    ok &= expect(lat_res.residual_max >= 0.1, "latitude_circle residual " +
                                                  fmt(lat_res.residual_max) + " >= 0.1");

    const CatalogInstance plane = instantiate("plane");
    const ConditionResult plane_res =
        check_sphere(plane.spec, seeded_samples(plane.spec, 200, 7));
    ok &= expect(plane_res.verdict == Verdict::Violated, "plane Violated");
    ok &= expect(std::abs(plane_res.recovered.at("c")) <= 1e-12,
                 "plane recovered c = 0 (excluded)");
    return ok;
}

std::string run_cli_to_file(const std::string& binary,
                            const std::vector<std::string>& args,
                            const std::string& report_path) {
    if (!binary.empty()) {
        std::string cmd = binary;
        for (const auto& a : args) cmd += " " + a;
        cmd += " --report " + report_path;
        const int rc = std::system(cmd.c_str());
        if (rc == -1) note("could not spawn " + binary);
    } else {
        std::vector<std::string> full = args;
        full.push_back("--report");
        full.push_back(report_path);
        std::ostringstream out, err;
        cli_run(full, out, err);
    }
    std::ifstream in(report_path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool deterministic_reports(const std::string& binary) {
    const std::vector<std::string> args = {
        "check", "cylinder", "--catalog", "example34", "--param", "n=2",
        "--param", "a=1.2247448713915890", "--samples", "200", "--seed", "7"};
    const std::string a = run_cli_to_file(binary, args, "acceptance_run_a.json");
    const std::string b = run_cli_to_file(binary, args, "acceptance_run_b.json");
    std::remove("acceptance_run_a.json");
    std::remove("acceptance_run_b.json");
    bool ok = expect(!a.empty(), "first run produced a report");
    ok &= expect(a == b, "two seeded runs are byte-identical");
    ok &= expect(a.find("\"verdict\": \"Satisfied\"") != std::string::npos,
                 "report verdict Satisfied");
    return ok;
}

bool rotation_equivariance() {
    bool ok = true;

    const CatalogInstance ct = instantiate("clifford_torus");
    const Eigen::MatrixXd q4 = testing::random_orthogonal(4, 20240717);
    const auto ct_samples = seeded_samples(ct.spec, 100, 7);
    const double sphere_res = check_sphere(ct.spec, ct_samples).residual_max;
    const double sphere_rot =
        check_sphere(apply_linear_map(ct.spec, q4), ct_samples).residual_max;
    ok &= expect(std::abs(sphere_res - sphere_rot) <= 1e-10,
                 "sphere residual shift " + fmt(std::abs(sphere_res - sphere_rot)));

    const CatalogInstance ex = instantiate("example34");
    const Eigen::MatrixXd q5 = testing::random_orthogonal(ex.spec.N, 20240717);
    const auto ex_samples = seeded_samples(ex.spec, 100, 7);
    const double cyl_res = check_cylinder(ex.spec, *ex.frame, ex_samples).residual_max;
    const double cyl_rot = check_cylinder(apply_linear_map(ex.spec, q5),
                                          ex.frame->rotated(q5), ex_samples)
                               .residual_max;
    ok &= expect(std::abs(cyl_res - cyl_rot) <= 1e-10,
                 "cylinder residual shift " + fmt(std::abs(cyl_res - cyl_rot)));

    const CatalogInstance sp = instantiate("scaled_product");
    const auto sp_samples = seeded_samples(sp.spec, 100, 7);
    const double tor_res = check_torus(sp.spec, *sp.frame, sp_samples).residual_max;
    const double tor_rot = check_torus(apply_linear_map(sp.spec, q4),
                                       sp.frame->rotated(q4), sp_samples)
                               .residual_max;
    ok &= expect(std::abs(tor_res - tor_rot) <= 1e-10,
                 "torus residual shift " + fmt(std::abs(tor_res - tor_rot)));
    return ok;
}

} // namespace

int main(int argc, char** argv) {
    const std::string binary = argc > 1 ? argv[1] : "";

    criterion(1, "flat-family reproduction over six (n, a^2) cases",
              flat_family_reproduction);
    criterion(2, "classical eigenvalue condition on the square torus and sphere chart",
              classical_takahashi);
    criterion(3, "torus theorem, both branches plus the scaled negative control",
              torus_both_branches);
    criterion(4, "proof-internal identities on every catalog entry",
              proof_internal_identities);
    criterion(5, "jet derivatives against central finite differences",
              differentiation_against_finite_differences);
    criterion(6, "negative controls: latitude circle and plane", negative_controls);
    criterion(7, "byte-identical seeded reports",
              [&] { return deterministic_reports(binary); });
    criterion(8, "residuals unchanged under a fixed ambient rotation",
              rotation_equivariance);

    if (g_failures == 0) {
        std::printf("all acceptance criteria passed\n");
    } else {
        std::printf("%d acceptance criteria FAILED\n", g_failures);
    }
    return g_failures;
}
