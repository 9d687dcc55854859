#pragma once

#include <vector>

#include <Eigen/Dense>

#include "immcheck/expr.hpp"
#include "immcheck/jet.hpp"

namespace immcheck {

/// Charts with det g at or below this are rejected as degenerate.
inline constexpr double kEpsImmersion = 1e-10;

/// Relative tolerance for normality assertions (H and the second fundamental
/// form against the tangent space).
inline constexpr double kTolOrth = 1e-9;

/// Everything the spectral conditions consume at one sample point. All
/// derivatives are exact (second-order jets); the only error is rounding.
struct GeometryAtPoint {
    int m = 0;
    int N = 0;
    Eigen::VectorXd point;            // chart coordinates, length m
    Eigen::VectorXd F;                // immersion values, length N
    Eigen::MatrixXd dF;               // first partials, N x m
    std::vector<Eigen::MatrixXd> d2F; // second partials, N entries of m x m
    Eigen::MatrixXd g;                // induced metric dF^T dF
    Eigen::MatrixXd g_inv;
    double det_g = 0.0;
    double sqrt_det_g = 0.0;
    std::vector<Eigen::MatrixXd> gamma; // gamma[k](i,j) = Γ^k_ij
    Eigen::VectorXd laplace_F;          // length N, equals m * mean_curvature
    Eigen::VectorXd mean_curvature;     // length N
};

/// A parallel orthonormal frame of the ambient space together with the index
/// split that separates the product factors. Columns of E are the frame
/// vectors.
struct FrameSplit {
    enum class Kind { Cylinder, Torus };

    Kind kind = Kind::Cylinder;
    int n = 0; // sphere-factor dimension (first factor for Torus)
    int k = 0; // flat-factor dimension (Cylinder) or second sphere dimension (Torus)
    Eigen::MatrixXd E;

    /// S^n x R^k in R^{n+k+1}; the last k frame vectors span the flat factor.
    static FrameSplit cylinder(int n, int k);
    static FrameSplit cylinder(int n, int k, Eigen::MatrixXd frame);

    /// S^n x S^k in R^{n+k+2}; the first n+1 frame vectors span the first
    /// factor, the remaining k+1 the second.
    static FrameSplit torus(int n, int k);
    static FrameSplit torus(int n, int k, Eigen::MatrixXd frame);

    int ambient_dim() const { return kind == Kind::Cylinder ? n + k + 1 : n + k + 2; }

    /// First column index of the second (flat or second-sphere) block.
    int second_block_begin() const { return n + 1; }

    /// Frame conjugated by an ambient rotation Q (columns become Q E_i).
    FrameSplit rotated(const Eigen::MatrixXd& Q) const;

private:
    static void validate(const FrameSplit& f);
};

/// Metric, Christoffel symbols, Laplacian and mean curvature of the chart at
/// a point. Throws NotAnImmersion when det g <= kEpsImmersion.
GeometryAtPoint geometry_at(const ImmersionSpec& spec, const Eigen::VectorXd& point);

/// Laplace-Beltrami of a scalar whose second-order jet at geo.point is h:
/// sum_ij g^ij (h_ij - Γ^k_ij h_k).
double laplace_beltrami_scalar(const GeometryAtPoint& geo, const Jet2& h);

/// Laplace-Beltrami of an expression over the chart coordinates.
double laplace_beltrami_scalar(const ImmersionSpec& spec, const ExprAst& scalar,
                               const Eigen::VectorXd& point);

/// Second fundamental form: alpha[a](i,j) is the a-th ambient component of
/// the normal part of the second partials.
std::vector<Eigen::MatrixXd> second_fundamental_form(const GeometryAtPoint& geo);

/// Squared norms of the tangential projections of the frame vectors:
/// entry i = sum_ab g^ab <E_i, d_a F> <E_i, d_b F>.
Eigen::VectorXd tangent_projection_norms(const GeometryAtPoint& geo, const FrameSplit& frame);

/// Same, for an arbitrary orthonormal frame given by the columns of E.
Eigen::VectorXd tangent_projection_norms(const GeometryAtPoint& geo, const Eigen::MatrixXd& E);

/// Jet of |F|^2 at geo.point, assembled from the stored derivatives.
Jet2 norm_squared_jet(const GeometryAtPoint& geo);

/// Jet of the height function <F, v> at geo.point.
Jet2 height_jet(const GeometryAtPoint& geo, const Eigen::VectorXd& v);

} // namespace immcheck
