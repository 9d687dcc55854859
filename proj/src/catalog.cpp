#include "immcheck/catalog.hpp"

#include <cfloat>
#include <cmath>
#include <cstdio>

namespace immcheck {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

const std::string kTwoPi = fmt(2.0 * M_PI);

double param_or(const std::map<std::string, double>& params, const std::string& name,
                double fallback) {
    auto it = params.find(name);
    return it == params.end() ? fallback : it->second;
}

void reject_unknown(const std::string& id, const std::map<std::string, double>& params,
                    std::initializer_list<const char*> known) {
    for (const auto& [name, _] : params) {
        bool ok = false;
        for (const char* k : known)
            if (name == k) ok = true;
        if (!ok)
            throw Error("unknown parameter '" + name + "' for catalog entry '" + id + "'");
    }
}

CatalogExpectation expect(Verdict v, std::map<std::string, double> constants = {},
                          std::optional<TorusBranch> branch = std::nullopt) {
    CatalogExpectation e;
    e.verdict = v;
    e.constants = std::move(constants);
    e.branch = branch;
    return e;
}

} // namespace

double solve_b(int n, double a) {
    if (n < 2)
        throw OutOfRange("solve_b requires n >= 2");
    double a2 = a * a;
    // a = sqrt(n) squares to n only up to rounding; snap to the endpoint.
    if (a2 > n && a2 <= n * (1.0 + 64.0 * DBL_EPSILON)) a2 = static_cast<double>(n);
    const double denom = a2 - static_cast<double>(n) + 1.0;
    if (!(denom > 0.0))
        throw OutOfRange("solve_b requires a > sqrt(n-1); got a = " + fmt(a) +
                         " for n = " + std::to_string(n));
    const double numer = static_cast<double>(n) - a2;
    if (numer < 0.0)
        throw OutOfRange("solve_b requires a <= sqrt(n); got a = " + fmt(a) +
                         " for n = " + std::to_string(n));
    return std::sqrt(a2 * numer / (static_cast<double>(n) * denom));
}

const std::vector<CatalogEntryInfo>& catalog_entries() {
    static const std::vector<CatalogEntryInfo> entries = {
        {"plane", "flat plane chart in R^3", {}},
        {"round_sphere", "unit sphere chart (polar angles)", {}},
        {"circle", "unit circle at arc length", {}},
        {"latitude_circle", "circle at height z0 on the unit sphere", {{"z0", 0.5}}},
        {"clifford_torus", "square torus in the unit 3-sphere", {}},
        {"example34", "flat family in S^(2n-1) x R with solved b",
         {{"n", 2.0}, {"a", std::sqrt(1.5)}}},
        {"right_cylinder", "unit cylinder S^1 x R", {}},
        {"helix_graph", "cylinder chart sheared along the axis", {{"slope", 0.3}}},
        {"product_circles", "product of two unit circles in R^4", {}},
        {"diagonal_circle", "diagonal circle in S^1 x S^1", {}},
        {"scaled_product", "product of circles with radii r, s; r^2 + s^2 = 2",
         {{"r2", 1.5}}},
        {"circle_x_sphere", "product of a unit circle and a unit 2-sphere", {}},
    };
    return entries;
}

CatalogInstance instantiate(const std::string& id,
                            const std::map<std::string, double>& params) {
    CatalogInstance inst;
    inst.id = id;

    if (id == "plane") {
        reject_unknown(id, params, {});
        inst.source = "dim 2 -> 3;\n"
                      "F = (x1, x2, 0);\n"
                      "box x1 in [0,1], x2 in [0,1];\n";
        inst.expected[CheckKind::Sphere] = expect(Verdict::Violated, {{"c", 0.0}});
    } else if (id == "round_sphere") {
        reject_unknown(id, params, {});
        inst.source = "dim 2 -> 3;\n"
                      "F = (sin(x1)*cos(x2), sin(x1)*sin(x2), cos(x1));\n"
                      "box x1 in [0.2," + fmt(M_PI - 0.2) + "], x2 in [0," + kTwoPi + "];\n";
        inst.expected[CheckKind::Sphere] = expect(Verdict::Satisfied, {{"c", 1.0}});
    } else if (id == "circle") {
        reject_unknown(id, params, {});
        inst.source = "dim 1 -> 2;\n"
                      "F = (cos(x1), sin(x1));\n"
                      "box x1 in [0," + kTwoPi + "];\n";
        inst.expected[CheckKind::Sphere] = expect(Verdict::Satisfied, {{"c", 1.0}});
    } else if (id == "latitude_circle") {
        reject_unknown(id, params, {"z0"});
        const double z0 = param_or(params, "z0", 0.5);
        if (!(std::abs(z0) < 1.0))
            throw OutOfRange("latitude_circle requires |z0| < 1");
        inst.params["z0"] = z0;
        inst.source = "param z0=" + fmt(z0) + ";\n"
                      "dim 1 -> 3;\n"
                      "F = (sqrt(1-z0^2)*cos(x1), sqrt(1-z0^2)*sin(x1), z0);\n"
                      "box x1 in [0," + kTwoPi + "];\n";
        inst.expected[CheckKind::Sphere] =
            std::abs(z0) <= 1e-12 ? expect(Verdict::Satisfied, {{"c", 1.0}})
                                  : expect(Verdict::Violated);
    } else if (id == "clifford_torus") {
        reject_unknown(id, params, {});
        inst.source = "dim 2 -> 4;\n"
                      "F = (cos(x1)/sqrt(2), sin(x1)/sqrt(2), "
                      "cos(x2)/sqrt(2), sin(x2)/sqrt(2));\n"
                      "box x1 in [0," + kTwoPi + "], x2 in [0," + kTwoPi + "];\n";
        inst.frame = FrameSplit::torus(1, 1);
        inst.expected[CheckKind::Sphere] = expect(Verdict::Satisfied, {{"c", 1.0}});
        // Lies on the unit sphere, not on the torus's ambient sphere of
        // squared radius 2.
        inst.expected[CheckKind::Torus] = expect(Verdict::Degenerate);
    } else if (id == "example34") {
        reject_unknown(id, params, {"n", "a"});
        const double n_raw = param_or(params, "n", 2.0);
        if (n_raw != std::floor(n_raw) || n_raw < 2.0 || n_raw > 16.0)
            throw OutOfRange("example34 requires an integer n with 2 <= n <= 16");
        const int n = static_cast<int>(n_raw);
        const double a = param_or(params, "a", std::sqrt(1.5));
        const double b = solve_b(n, a);
        double a2 = a * a;
        if (a2 > n) a2 = static_cast<double>(n);
        inst.params["n"] = n_raw;
        inst.params["a"] = a;
        inst.params["b"] = b;

        const std::string root = "sqrt(" + std::to_string(n) + ")";
        std::string components, sum, box;
        for (int j = 1; j <= n; ++j) {
            const std::string xj = "x" + std::to_string(j);
            components += "cos(a*" + xj + ")/" + root + ", sin(a*" + xj + ")/" + root + ", ";
            sum += (j > 1 ? "+" : "") + xj;
            box += (j > 1 ? ", " : "") + xj + " in [0," + kTwoPi + "]";
        }
        inst.source = "param a=" + fmt(a) + ";\nparam b=" + fmt(b) + ";\n"
                      "dim " + std::to_string(n) + " -> " + std::to_string(2 * n + 1) + ";\n"
                      "F = (" + components + "b*(" + sum + ")/" + root + ");\n"
                      "box " + box + ";\n";
        inst.frame = FrameSplit::cylinder(2 * n - 1, 1);
        inst.expected[CheckKind::Cylinder] = expect(
            Verdict::Satisfied,
            {{"c", 1.0}, {"r2", 1.0}, {"T2", static_cast<double>(n) - a2}});
    } else if (id == "right_cylinder") {
        reject_unknown(id, params, {});
        inst.source = "dim 2 -> 3;\n"
                      "F = (cos(x1), sin(x1), x2);\n"
                      "box x1 in [0," + kTwoPi + "], x2 in [0,1];\n";
        inst.frame = FrameSplit::cylinder(1, 1);
        inst.expected[CheckKind::Cylinder] =
            expect(Verdict::Satisfied, {{"c", 1.0}, {"r2", 1.0}, {"T2", 1.0}});
        inst.expected[CheckKind::Sphere] = expect(Verdict::Violated);
    } else if (id == "helix_graph") {
        reject_unknown(id, params, {"slope"});
        const double slope = param_or(params, "slope", 0.3);
        inst.params["slope"] = slope;
        inst.source = "param slope=" + fmt(slope) + ";\n"
                      "dim 2 -> 3;\n"
                      "F = (cos(x1), sin(x1), x2+slope*x1);\n"
                      "box x1 in [0," + kTwoPi + "], x2 in [0,1];\n";
        inst.frame = FrameSplit::cylinder(1, 1);
        // Regression pin: a sheared chart of the full cylinder is a local
        // isometry onto S^1 x R, hence minimal; frozen from the oracle run.
        inst.expected[CheckKind::Cylinder] =
            expect(Verdict::Satisfied, {{"c", 1.0}, {"r2", 1.0}, {"T2", 1.0}});
    } else if (id == "product_circles") {
        reject_unknown(id, params, {});
        inst.source = "dim 2 -> 4;\n"
                      "F = (cos(x1), sin(x1), cos(x2), sin(x2));\n"
                      "box x1 in [0," + kTwoPi + "], x2 in [0," + kTwoPi + "];\n";
        inst.frame = FrameSplit::torus(1, 1);
        inst.expected[CheckKind::Torus] =
            expect(Verdict::Satisfied, {{"r2", 1.0}, {"s2", 1.0}},
                   TorusBranch::SphereMinimal);
        inst.expected[CheckKind::Sphere] = expect(Verdict::Satisfied, {{"c", 0.5}});
    } else if (id == "diagonal_circle") {
        reject_unknown(id, params, {});
        inst.source = "dim 1 -> 4;\n"
                      "F = (cos(x1), sin(x1), cos(x1), sin(x1));\n"
                      "box x1 in [0," + kTwoPi + "];\n";
        inst.frame = FrameSplit::torus(1, 1);
        inst.expected[CheckKind::Torus] =
            expect(Verdict::Satisfied, {{"r2", 1.0}, {"s2", 1.0}},
                   TorusBranch::SphereMinimal);
        inst.expected[CheckKind::Sphere] = expect(Verdict::Satisfied, {{"c", 0.5}});
    } else if (id == "scaled_product") {
        reject_unknown(id, params, {"r2"});
        const double r2 = param_or(params, "r2", 1.5);
        if (!(r2 > 0.0 && r2 < 2.0))
            throw OutOfRange("scaled_product requires 0 < r2 < 2");
        inst.params["r2"] = r2;
        const double r = std::sqrt(r2), s = std::sqrt(2.0 - r2);
        inst.source = "param r=" + fmt(r) + ";\nparam s=" + fmt(s) + ";\n"
                      "dim 2 -> 4;\n"
                      "F = (r*cos(x1), r*sin(x1), s*cos(x2), s*sin(x2));\n"
                      "box x1 in [0," + kTwoPi + "], x2 in [0," + kTwoPi + "];\n";
        inst.frame = FrameSplit::torus(1, 1);
        inst.expected[CheckKind::Torus] =
            std::abs(r2 - 1.0) <= 1e-9
                ? expect(Verdict::Satisfied, {{"r2", 1.0}, {"s2", 1.0}},
                         TorusBranch::SphereMinimal)
                : expect(Verdict::Violated, {}, TorusBranch::SphereMinimal);
    } else if (id == "circle_x_sphere") {
        reject_unknown(id, params, {});
        inst.source = "dim 3 -> 5;\n"
                      "F = (cos(x1), sin(x1), sin(x2)*cos(x3), sin(x2)*sin(x3), cos(x2));\n"
                      "box x1 in [0," + kTwoPi + "], x2 in [0.2," + fmt(M_PI - 0.2) +
                      "], x3 in [0," + kTwoPi + "];\n";
        inst.frame = FrameSplit::torus(1, 2);
        inst.expected[CheckKind::Torus] =
            expect(Verdict::Satisfied, {{"r2", 1.0}, {"s2", 1.0}},
                   TorusBranch::ProductMinimal);
        inst.expected[CheckKind::Sphere] = expect(Verdict::Violated);
    } else {
        throw Error("unknown catalog id '" + id + "'");
    }

    inst.spec = parse(inst.source);
    return inst;
}

} // namespace immcheck
