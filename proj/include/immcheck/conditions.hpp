#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "immcheck/geometry.hpp"

namespace immcheck {

enum class CheckKind { Sphere, Cylinder, Torus };
enum class Verdict { Satisfied, Violated, Degenerate };
enum class TorusBranch { SphereMinimal, ProductMinimal };

const char* to_string(CheckKind kind);
const char* to_string(Verdict verdict);
const char* to_string(TorusBranch branch);

struct CheckTolerances {
    double tol_check = 1e-8; // relative residual bound for Satisfied
    double tol_const = 1e-8; // absolute spread bound for recovered constants
};

/// Mean, sample standard deviation and a constancy flag for a list of
/// per-sample values of a quantity the theory predicts to be constant.
struct ConstantStats {
    double mean = 0.0;
    double spread = 0.0;
    bool is_constant = false;
};

ConstantStats recover_constants(const std::vector<double>& per_sample_values,
                                double tol_const);

/// Outcome of one condition check over a sample set.
struct ConditionResult {
    CheckKind kind = CheckKind::Sphere;
    Verdict verdict = Verdict::Violated;
    double residual_max = 0.0;
    double residual_rms = 0.0;
    std::map<std::string, double> recovered; // c, r2, s2, eigen, ...
    std::map<std::string, double> spread;    // per-constant sample spreads
    std::optional<TorusBranch> branch;       // torus only
    int samples_used = 0;
    std::string note; // degeneracy reason or extra observations

    /// Max residuals of the structural identities evaluated alongside the
    /// check (trace identity, frame completeness, |F|^2 Laplacian, ...).
    std::map<std::string, double> identity_residuals;
};

/// ΔF = -mcF with one constant c: minimality in a sphere of curvature c.
ConditionResult check_sphere(const ImmersionSpec& spec,
                             const std::vector<Eigen::VectorXd>& samples,
                             const CheckTolerances& tols = {});

/// ΔF = -c(m - Σ_flat |T_j|^2) (F - Σ_flat <F,E_j>E_j): minimality in
/// S^n_c x R^k for the given frame split. c is recovered as 1/r^2 from the
/// constant squared distance r^2 to the flat factor.
ConditionResult check_cylinder(const ImmersionSpec& spec, const FrameSplit& frame,
                               const std::vector<Eigen::VectorXd>& samples,
                               const CheckTolerances& tols = {});

/// ΔF = -(m - Σ_2 |T_j|^2) N_1 - (m - Σ_1 |T_l|^2) N_2 on the sphere of
/// squared radius 2: minimality in S^n x S^k. Branches on whether the two
/// block sums coincide at every sample.
ConditionResult check_torus(const ImmersionSpec& spec, const FrameSplit& frame,
                            const std::vector<Eigen::VectorXd>& samples,
                            const CheckTolerances& tols = {});

} // namespace immcheck
