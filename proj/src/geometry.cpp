#include "immcheck/geometry.hpp"

#include <cmath>

namespace immcheck {

namespace {

void validate_orthonormal(const Eigen::MatrixXd& E) {
    const int N = static_cast<int>(E.rows());
    if (E.cols() != N)
        throw DimensionMismatch("frame matrix must be square");
    const double dev = (E.transpose() * E - Eigen::MatrixXd::Identity(N, N))
                           .cwiseAbs()
                           .maxCoeff();
    if (dev > 1e-12)
        throw Error("frame is not orthonormal: max |E^T E - I| = " + std::to_string(dev));
}

} // namespace

FrameSplit FrameSplit::cylinder(int n, int k) {
    return cylinder(n, k, Eigen::MatrixXd::Identity(n + k + 1, n + k + 1));
}

FrameSplit FrameSplit::cylinder(int n, int k, Eigen::MatrixXd frame) {
    FrameSplit f;
    f.kind = Kind::Cylinder;
    f.n = n;
    f.k = k;
    f.E = std::move(frame);
    validate(f);
    return f;
}

FrameSplit FrameSplit::torus(int n, int k) {
    return torus(n, k, Eigen::MatrixXd::Identity(n + k + 2, n + k + 2));
}

FrameSplit FrameSplit::torus(int n, int k, Eigen::MatrixXd frame) {
    FrameSplit f;
    f.kind = Kind::Torus;
    f.n = n;
    f.k = k;
    f.E = std::move(frame);
    validate(f);
    return f;
}

void FrameSplit::validate(const FrameSplit& f) {
    if (f.n < 1 || f.k < 1)
        throw DimensionMismatch("frame split requires n >= 1 and k >= 1");
    if (f.E.rows() != f.ambient_dim())
        throw DimensionMismatch("frame matrix is " + std::to_string(f.E.rows()) +
                                "-dimensional, split requires " +
                                std::to_string(f.ambient_dim()));
    validate_orthonormal(f.E);
}

FrameSplit FrameSplit::rotated(const Eigen::MatrixXd& Q) const {
    FrameSplit f = *this;
    f.E = Q * E;
    validate(f);
    return f;
}

GeometryAtPoint geometry_at(const ImmersionSpec& spec, const Eigen::VectorXd& point) {
    const std::vector<Jet2> jets = eval_chart(spec, point);
    const int m = spec.m, N = spec.N;

    GeometryAtPoint geo;
    geo.m = m;
    geo.N = N;
    geo.point = point;
    geo.F.resize(N);
    geo.dF.resize(N, m);
    geo.d2F.reserve(static_cast<std::size_t>(N));
    for (int a = 0; a < N; ++a) {
        geo.F(a) = jets[a].value();
        geo.dF.row(a) = jets[a].grad().transpose();
        geo.d2F.push_back(jets[a].hess());
    }

    // g = dF^T dF, written symmetrically.
    geo.g.resize(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = i; j < m; ++j) {
            const double e = geo.dF.col(i).dot(geo.dF.col(j));
            geo.g(i, j) = e;
            geo.g(j, i) = e;
        }
    }

    Eigen::FullPivLU<Eigen::MatrixXd> lu(geo.g);
    geo.det_g = lu.determinant();
    if (!(geo.det_g > kEpsImmersion)) {
        std::vector<double> p(point.data(), point.data() + point.size());
        throw NotAnImmersion(std::move(p), geo.det_g);
    }
    geo.sqrt_det_g = std::sqrt(geo.det_g);
    Eigen::MatrixXd inv = lu.inverse();
    // The LU inverse of a symmetric matrix is only symmetric up to rounding;
    // mirror the averaged upper triangle.
    geo.g_inv.resize(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = i; j < m; ++j) {
            const double e = 0.5 * (inv(i, j) + inv(j, i));
            geo.g_inv(i, j) = e;
            geo.g_inv(j, i) = e;
        }
    }

    // Γ^k_ij = g^kl <d_i d_j F, d_l F>; needs only second jets.
    std::vector<Eigen::MatrixXd> second_dot(static_cast<std::size_t>(m));
    for (int l = 0; l < m; ++l) second_dot[l].resize(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = i; j < m; ++j) {
            for (int l = 0; l < m; ++l) {
                double dot = 0.0;
                for (int a = 0; a < N; ++a) dot += geo.d2F[a](i, j) * geo.dF(a, l);
                second_dot[l](i, j) = dot;
                second_dot[l](j, i) = dot;
            }
        }
    }
    geo.gamma.assign(static_cast<std::size_t>(m), Eigen::MatrixXd::Zero(m, m));
    for (int kk = 0; kk < m; ++kk) {
        for (int i = 0; i < m; ++i) {
            for (int j = i; j < m; ++j) {
                double s = 0.0;
                for (int l = 0; l < m; ++l) s += geo.g_inv(kk, l) * second_dot[l](i, j);
                geo.gamma[kk](i, j) = s;
                geo.gamma[kk](j, i) = s;
            }
        }
    }

    // ΔF^a = g^ij (d_i d_j F^a - Γ^k_ij d_k F^a). The mean curvature is the
    // primary quantity; laplace_F is rebuilt as m * H so the trace identity
    // holds bit-exactly.
    Eigen::VectorXd lap(N);
    for (int a = 0; a < N; ++a) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                double corrected = geo.d2F[a](i, j);
                for (int kk = 0; kk < m; ++kk) corrected -= geo.gamma[kk](i, j) * geo.dF(a, kk);
                s += geo.g_inv(i, j) * corrected;
            }
        }
        lap(a) = s;
    }
    geo.mean_curvature = lap / static_cast<double>(m);
    geo.laplace_F = static_cast<double>(m) * geo.mean_curvature;
    return geo;
}

double laplace_beltrami_scalar(const GeometryAtPoint& geo, const Jet2& h) {
    if (h.dim() != geo.m)
        throw DimensionMismatch("scalar jet dimension does not match chart dimension");
    double s = 0.0;
    for (int i = 0; i < geo.m; ++i) {
        for (int j = 0; j < geo.m; ++j) {
            double corrected = h.hess()(i, j);
            for (int kk = 0; kk < geo.m; ++kk) corrected -= geo.gamma[kk](i, j) * h.grad()(kk);
            s += geo.g_inv(i, j) * corrected;
        }
    }
    return s;
}

double laplace_beltrami_scalar(const ImmersionSpec& spec, const ExprAst& scalar,
                               const Eigen::VectorXd& point) {
    const GeometryAtPoint geo = geometry_at(spec, point);
    return laplace_beltrami_scalar(geo, eval_scalar(scalar, spec.params, point));
}

std::vector<Eigen::MatrixXd> second_fundamental_form(const GeometryAtPoint& geo) {
    std::vector<Eigen::MatrixXd> alpha(static_cast<std::size_t>(geo.N));
    for (int a = 0; a < geo.N; ++a) {
        alpha[a].resize(geo.m, geo.m);
        for (int i = 0; i < geo.m; ++i) {
            for (int j = i; j < geo.m; ++j) {
                double e = geo.d2F[a](i, j);
                for (int kk = 0; kk < geo.m; ++kk) e -= geo.gamma[kk](i, j) * geo.dF(a, kk);
                alpha[a](i, j) = e;
                alpha[a](j, i) = e;
            }
        }
    }
    return alpha;
}

Eigen::VectorXd tangent_projection_norms(const GeometryAtPoint& geo, const Eigen::MatrixXd& E) {
    if (E.rows() != geo.N)
        throw DimensionMismatch("frame dimension does not match ambient dimension");
    const int count = static_cast<int>(E.cols());
    Eigen::VectorXd t2(count);
    for (int i = 0; i < count; ++i) {
        const Eigen::VectorXd w = geo.dF.transpose() * E.col(i);
        t2(i) = w.dot(geo.g_inv * w);
    }
    return t2;
}

Eigen::VectorXd tangent_projection_norms(const GeometryAtPoint& geo, const FrameSplit& frame) {
    return tangent_projection_norms(geo, frame.E);
}

Jet2 norm_squared_jet(const GeometryAtPoint& geo) {
    const int m = geo.m;
    double v = geo.F.squaredNorm();
    Eigen::VectorXd grad(m);
    for (int i = 0; i < m; ++i) grad(i) = 2.0 * geo.F.dot(geo.dF.col(i));
    Eigen::MatrixXd hess(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = i; j < m; ++j) {
            double e = geo.dF.col(i).dot(geo.dF.col(j));
            for (int a = 0; a < geo.N; ++a) e += geo.F(a) * geo.d2F[a](i, j);
            hess(i, j) = 2.0 * e;
        }
    }
    return Jet2::from_parts(v, std::move(grad), std::move(hess));
}

Jet2 height_jet(const GeometryAtPoint& geo, const Eigen::VectorXd& v) {
    if (v.size() != geo.N)
        throw DimensionMismatch("height direction does not match ambient dimension");
    const int m = geo.m;
    Eigen::VectorXd grad = geo.dF.transpose() * v;
    Eigen::MatrixXd hess(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            double e = 0.0;
            for (int a = 0; a < geo.N; ++a) e += v(a) * geo.d2F[a](i, j);
            hess(i, j) = e;
        }
    return Jet2::from_parts(geo.F.dot(v), std::move(grad), std::move(hess));
}

} // namespace immcheck
