#include "immcheck/conditions.hpp"

#include <algorithm>
#include <cmath>

namespace immcheck {

const char* to_string(CheckKind kind) {
    switch (kind) {
        case CheckKind::Sphere: return "sphere";
        case CheckKind::Cylinder: return "cylinder";
        case CheckKind::Torus: return "torus";
    }
    return "?";
}

const char* to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::Satisfied: return "Satisfied";
        case Verdict::Violated: return "Violated";
        case Verdict::Degenerate: return "Degenerate";
    }
    return "?";
}

const char* to_string(TorusBranch branch) {
    switch (branch) {
        case TorusBranch::SphereMinimal: return "SphereMinimal";
        case TorusBranch::ProductMinimal: return "ProductMinimal";
    }
    return "?";
}

namespace {

// One-pass mean and sample standard deviation (Welford). Samples are fed in
// canonical list order so results do not depend on any parallel schedule.
class Welford {
public:
    void add(double x) {
        ++n_;
        const double d = x - mean_;
        mean_ += d / static_cast<double>(n_);
        m2_ += d * (x - mean_);
    }
    long count() const { return n_; }
    double mean() const { return mean_; }
    double sample_sd() const {
        return n_ > 1 ? std::sqrt(std::max(0.0, m2_ / static_cast<double>(n_ - 1))) : 0.0;
    }

private:
    long n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

class ResidualTracker {
public:
    void add(double r) {
        max_ = std::max(max_, r);
        sum_sq_ += r * r;
        ++n_;
    }
    double max() const { return max_; }
    double rms() const { return n_ ? std::sqrt(sum_sq_ / static_cast<double>(n_)) : 0.0; }

private:
    double max_ = 0.0;
    double sum_sq_ = 0.0;
    long n_ = 0;
};

// Structural identities tracked alongside every check. These do not gate the
// verdict; they validate the geometry pipeline itself.
struct IdentityAccumulator {
    double trace_identity = 0.0;     // |ΔF - m H|
    double h_normality = 0.0;        // max_j |<H, d_j F>| / (|H| |d_j F|)
    double frame_completeness = 0.0; // |Σ_i |T_i|^2 - m| over the standard frame
    double norm_sq_laplace = 0.0;    // Δ|F|^2 vs 2(<ΔF,F> + m), relative

    void update(const GeometryAtPoint& geo) {
        const double m = static_cast<double>(geo.m);
        trace_identity = std::max(
            trace_identity, (geo.laplace_F - m * geo.mean_curvature).norm());

        const double h_norm = geo.mean_curvature.norm();
        if (h_norm > 0.0) {
            for (int j = 0; j < geo.m; ++j) {
                const double col_norm = geo.dF.col(j).norm();
                if (col_norm == 0.0) continue;
                const double dot = std::abs(geo.mean_curvature.dot(geo.dF.col(j)));
                h_normality = std::max(h_normality, dot / (h_norm * col_norm));
            }
        }

        const Eigen::VectorXd t2 = tangent_projection_norms(
            geo, Eigen::MatrixXd::Identity(geo.N, geo.N));
        frame_completeness = std::max(frame_completeness, std::abs(t2.sum() - m));

        const double lap_n2 = laplace_beltrami_scalar(geo, norm_squared_jet(geo));
        const double rhs = 2.0 * (geo.laplace_F.dot(geo.F) + m);
        norm_sq_laplace = std::max(
            norm_sq_laplace, std::abs(lap_n2 - rhs) / std::max(1.0, std::abs(rhs)));
    }

    void fold_into(std::map<std::string, double>& out) const {
        out["laplacian_equals_m_mean_curvature"] = trace_identity;
        out["mean_curvature_normality"] = h_normality;
        out["frame_completeness_sum_t2"] = frame_completeness;
        out["norm_sq_laplacian_identity"] = norm_sq_laplace;
    }
};

void require_samples(const std::vector<Eigen::VectorXd>& samples) {
    if (samples.size() < 2)
        throw Error("a condition check needs at least 2 sample points");
}

} // namespace

ConstantStats recover_constants(const std::vector<double>& per_sample_values,
                                double tol_const) {
    if (per_sample_values.empty())
        throw Error("recover_constants needs a non-empty value list");
    Welford w;
    for (double v : per_sample_values) w.add(v);
    ConstantStats st;
    st.mean = w.mean();
    st.spread = w.sample_sd();
    st.is_constant = st.spread <= tol_const;
    return st;
}

// ---------------------------------------------------------------------------
// Sphere: ΔF = -mcF (classical Takahashi condition)
// ---------------------------------------------------------------------------

ConditionResult check_sphere(const ImmersionSpec& spec,
                             const std::vector<Eigen::VectorXd>& samples,
                             const CheckTolerances& tols) {
    require_samples(samples);
    const double m = static_cast<double>(spec.m);

    ConditionResult res;
    res.kind = CheckKind::Sphere;
    res.samples_used = static_cast<int>(samples.size());

    IdentityAccumulator ids;
    std::vector<Eigen::VectorXd> values, laplacians;
    values.reserve(samples.size());
    laplacians.reserve(samples.size());
    Welford ratio;
    double sum_dot = 0.0, sum_norm_sq = 0.0;

    for (const auto& p : samples) {
        const GeometryAtPoint geo = geometry_at(spec, p);
        ids.update(geo);
        const double norm_sq = geo.F.squaredNorm();
        if (std::sqrt(norm_sq) < 1e-12) {
            ids.fold_into(res.identity_residuals);
            res.verdict = Verdict::Degenerate;
            res.note = "degenerate fit: |F| vanishes at a sample point";
            return res;
        }
        const double dot = geo.laplace_F.dot(geo.F);
        sum_dot += dot;
        sum_norm_sq += norm_sq;
        ratio.add(-dot / (m * norm_sq));
        values.push_back(geo.F);
        laplacians.push_back(geo.laplace_F);
    }

    const double c = -sum_dot / (m * sum_norm_sq);
    ResidualTracker residuals;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double r = (laplacians[i] + m * c * values[i]).norm() /
                         (m * std::max(1.0, values[i].norm()));
        residuals.add(r);
    }

    res.residual_max = residuals.max();
    res.residual_rms = residuals.rms();
    res.recovered["c"] = c;
    res.recovered["eigen"] = m * c;
    res.spread["c"] = ratio.sample_sd();
    ids.fold_into(res.identity_residuals);

    if (res.residual_max > tols.tol_check) {
        res.verdict = Verdict::Violated;
        res.note = "eigenvalue condition fails";
    } else if (ratio.sample_sd() > tols.tol_const) {
        res.verdict = Verdict::Violated;
        res.note = "per-sample eigenvalue ratio is not constant";
    } else if (std::abs(c) <= tols.tol_const) {
        res.verdict = Verdict::Violated;
        res.note = "recovered c = 0 is excluded by the spectral condition";
    } else if (c < 0.0) {
        res.verdict = Verdict::Violated;
        res.note = "recovered c is negative";
    } else {
        res.verdict = Verdict::Satisfied;
    }
    return res;
}

// ---------------------------------------------------------------------------
// Cylinder: ΔF = -c(m - Σ_flat |T_j|^2) P with P the projection of F away
// from the flat factor and c = 1/r^2 recovered from the constant |P|^2.
// ---------------------------------------------------------------------------

ConditionResult check_cylinder(const ImmersionSpec& spec, const FrameSplit& frame,
                               const std::vector<Eigen::VectorXd>& samples,
                               const CheckTolerances& tols) {
    require_samples(samples);
    if (frame.kind != FrameSplit::Kind::Cylinder)
        throw DimensionMismatch("check_cylinder requires a cylinder frame split");
    if (frame.ambient_dim() != spec.N)
        throw DimensionMismatch("frame split dimension " + std::to_string(frame.ambient_dim()) +
                                " does not match ambient dimension " + std::to_string(spec.N));

    const double m = static_cast<double>(spec.m);
    const int flat_begin = frame.second_block_begin();
    const auto flat_block = frame.E.middleCols(flat_begin, frame.k);

    ConditionResult res;
    res.kind = CheckKind::Cylinder;
    res.samples_used = static_cast<int>(samples.size());

    IdentityAccumulator ids;
    Welford pp_stats;
    Welford flat_sum_stats;
    double flat_orth = 0.0;
    double eq8_residual = 0.0;

    std::vector<Eigen::VectorXd> laplacians, projections;
    std::vector<double> flat_sums, value_norms;
    laplacians.reserve(samples.size());
    projections.reserve(samples.size());

    for (const auto& p : samples) {
        const GeometryAtPoint geo = geometry_at(spec, p);
        ids.update(geo);

        const Eigen::VectorXd t2 = tangent_projection_norms(geo, frame);
        const double s = t2.tail(frame.k).sum();
        const Eigen::VectorXd proj = geo.F - flat_block * (flat_block.transpose() * geo.F);

        pp_stats.add(proj.squaredNorm());
        flat_sum_stats.add(s);
        flat_orth = std::max(flat_orth,
                             (flat_block.transpose() * proj).cwiseAbs().maxCoeff() /
                                 std::max(1.0, geo.F.norm()));

        const double lap_n2 = laplace_beltrami_scalar(geo, norm_squared_jet(geo));
        eq8_residual = std::max(eq8_residual,
                                std::abs(lap_n2 - 2.0 * s) / std::max(1.0, std::abs(2.0 * s)));

        laplacians.push_back(geo.laplace_F);
        projections.push_back(proj);
        flat_sums.push_back(s);
        value_norms.push_back(geo.F.norm());
    }

    ids.fold_into(res.identity_residuals);
    res.identity_residuals["projection_orthogonal_to_flat_frame"] = flat_orth;
    res.identity_residuals["norm_sq_laplacian_equals_2_flat_sum"] = eq8_residual;

    const double r2 = pp_stats.mean();
    res.recovered["r2"] = r2;
    res.spread["r2"] = pp_stats.sample_sd();
    if (frame.k == 1) {
        res.recovered["T2"] = flat_sum_stats.mean();
        res.spread["T2"] = flat_sum_stats.sample_sd();
    }

    if (r2 < 1e-12) {
        res.verdict = Verdict::Degenerate;
        res.note = "degenerate fit: the image lies in the flat factor";
        return res;
    }
    if (pp_stats.sample_sd() > tols.tol_const) {
        res.verdict = Verdict::Degenerate;
        res.note = "degenerate fit: squared distance to the flat factor is not constant, "
                   "so the image lies in no cylinder of this split";
        return res;
    }

    const double c = 1.0 / r2;
    res.recovered["c"] = c;

    ResidualTracker residuals;
    for (std::size_t i = 0; i < laplacians.size(); ++i) {
        const double r = (laplacians[i] + c * (m - flat_sums[i]) * projections[i]).norm() /
                         (m * std::max(1.0, value_norms[i]));
        residuals.add(r);
    }
    res.residual_max = residuals.max();
    res.residual_rms = residuals.rms();

    if (res.residual_max > tols.tol_check) {
        res.verdict = Verdict::Violated;
        res.note = "cylinder eigen-condition fails";
    } else {
        res.verdict = Verdict::Satisfied;
    }
    return res;
}

// ---------------------------------------------------------------------------
// Torus: on the ambient sphere |F|^2 = 2, either the two block sums of
// |T_i|^2 agree everywhere (reduces to ΔF = -(m/2)F) or the product
// condition ΔF = -(m - S2) N1 - (m - S1) N2 must hold with |N1| = |N2| = 1.
// ---------------------------------------------------------------------------

ConditionResult check_torus(const ImmersionSpec& spec, const FrameSplit& frame,
                            const std::vector<Eigen::VectorXd>& samples,
                            const CheckTolerances& tols) {
    require_samples(samples);
    if (frame.kind != FrameSplit::Kind::Torus)
        throw DimensionMismatch("check_torus requires a torus frame split");
    if (frame.ambient_dim() != spec.N)
        throw DimensionMismatch("frame split dimension " + std::to_string(frame.ambient_dim()) +
                                " does not match ambient dimension " + std::to_string(spec.N));

    const double m = static_cast<double>(spec.m);
    const int first_cols = frame.n + 1;
    const int second_cols = frame.k + 1;
    const auto first_block = frame.E.leftCols(first_cols);
    const auto second_block = frame.E.rightCols(second_cols);

    ConditionResult res;
    res.kind = CheckKind::Torus;
    res.samples_used = static_cast<int>(samples.size());

    IdentityAccumulator ids;
    Welford r2_stats, s2_stats, eigen_stats;
    double ambient_dev = 0.0;
    double block_separation = 0.0;
    ResidualTracker product_residuals, sphere_residuals;

    for (const auto& p : samples) {
        const GeometryAtPoint geo = geometry_at(spec, p);
        ids.update(geo);

        const double norm_sq = geo.F.squaredNorm();
        ambient_dev = std::max(ambient_dev, std::abs(norm_sq - 2.0));

        const Eigen::VectorXd n1 = geo.F - second_block * (second_block.transpose() * geo.F);
        const Eigen::VectorXd n2 = geo.F - first_block * (first_block.transpose() * geo.F);
        r2_stats.add(n1.squaredNorm());
        s2_stats.add(n2.squaredNorm());

        const Eigen::VectorXd t2 = tangent_projection_norms(geo, frame);
        const double s1 = t2.head(first_cols).sum();
        const double s2 = t2.tail(second_cols).sum();
        block_separation = std::max(block_separation, std::abs(s1 - s2));

        product_residuals.add(
            (geo.laplace_F + (m - s2) * n1 + (m - s1) * n2).norm() / m);
        sphere_residuals.add((geo.laplace_F + 0.5 * m * geo.F).norm() / m);
        if (norm_sq > 0.0) eigen_stats.add(-geo.laplace_F.dot(geo.F) / norm_sq);
    }

    ids.fold_into(res.identity_residuals);
    res.identity_residuals["ambient_norm_sq_minus_2"] = ambient_dev;
    res.identity_residuals["product_split_condition"] = product_residuals.max();

    res.recovered["r2"] = r2_stats.mean();
    res.recovered["s2"] = s2_stats.mean();
    res.spread["r2"] = r2_stats.sample_sd();
    res.spread["s2"] = s2_stats.sample_sd();

    if (ambient_dev > 2.0 * tols.tol_check) {
        res.verdict = Verdict::Degenerate;
        res.note = "image does not lie on the ambient sphere of squared radius 2";
        return res;
    }

    const bool sums_agree = block_separation <= tols.tol_check;
    if (sums_agree) {
        res.branch = TorusBranch::SphereMinimal;
        res.residual_max = sphere_residuals.max();
        res.residual_rms = sphere_residuals.rms();
        res.recovered["eigen"] = eigen_stats.mean();
        res.spread["eigen"] = eigen_stats.sample_sd();

        if (res.residual_max > tols.tol_check) {
            res.verdict = Verdict::Violated;
            res.note = "block sums agree but the half-dimension eigenvalue condition fails";
        } else if (eigen_stats.sample_sd() > tols.tol_const) {
            res.verdict = Verdict::Violated;
            res.note = "per-sample eigenvalue ratio is not constant";
        } else {
            res.verdict = Verdict::Satisfied;
            if (product_residuals.max() <= tols.tol_check &&
                std::abs(r2_stats.mean() - 1.0) <= tols.tol_check &&
                std::abs(s2_stats.mean() - 1.0) <= tols.tol_check) {
                res.note = "product condition also holds with |N1| = |N2| = 1";
            }
        }
        return res;
    }

    res.branch = TorusBranch::ProductMinimal;
    res.residual_max = product_residuals.max();
    res.residual_rms = product_residuals.rms();

    if (r2_stats.sample_sd() > tols.tol_const || s2_stats.sample_sd() > tols.tol_const) {
        res.verdict = Verdict::Degenerate;
        res.note = "degenerate fit: squared factor distances are not constant";
        return res;
    }
    if (res.residual_max > tols.tol_check) {
        res.verdict = Verdict::Violated;
        res.note = "product eigen-condition fails";
    } else if (std::abs(r2_stats.mean() - 1.0) > tols.tol_check ||
               std::abs(s2_stats.mean() - 1.0) > tols.tol_check) {
        res.verdict = Verdict::Violated;
        res.note = "factor distances differ from 1";
    } else {
        res.verdict = Verdict::Satisfied;
    }
    return res;
}

} // namespace immcheck
