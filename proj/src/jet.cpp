#include "immcheck/jet.hpp"

#include <cmath>

namespace immcheck {

namespace {

// u vᵀ + v uᵀ, filling both triangles from one computed product sum so the
// result is symmetric to the last bit.
Eigen::MatrixXd symmetric_pair(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    const int m = static_cast<int>(u.size());
    Eigen::MatrixXd out(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = i; j < m; ++j) {
            const double e = u(i) * v(j) + v(i) * u(j);
            out(i, j) = e;
            out(j, i) = e;
        }
    }
    return out;
}

// c · u uᵀ, symmetric by construction.
Eigen::MatrixXd scaled_outer(double c, const Eigen::VectorXd& u) {
    const int m = static_cast<int>(u.size());
    Eigen::MatrixXd out(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = i; j < m; ++j) {
            const double e = c * (u(i) * u(j));
            out(i, j) = e;
            out(j, i) = e;
        }
    }
    return out;
}

} // namespace

Jet2 Jet2::constant(double value, int m) {
    return Jet2(value, Eigen::VectorXd::Zero(m), Eigen::MatrixXd::Zero(m, m));
}

Jet2 Jet2::seed(const Eigen::VectorXd& point, int index) {
    const int m = static_cast<int>(point.size());
    if (index < 0 || index >= m)
        throw DomainError("seed: coordinate index " + std::to_string(index) +
                          " out of range for m = " + std::to_string(m));
    Eigen::VectorXd g = Eigen::VectorXd::Zero(m);
    g(index) = 1.0;
    return Jet2(point(index), std::move(g), Eigen::MatrixXd::Zero(m, m));
}

Jet2 Jet2::from_parts(double value, Eigen::VectorXd grad, Eigen::MatrixXd hess) {
    const int m = static_cast<int>(grad.size());
    if (hess.rows() != m || hess.cols() != m)
        throw DimensionMismatch("hessian shape does not match gradient length");
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) hess(j, i) = hess(i, j);
    return Jet2(value, std::move(grad), std::move(hess));
}

void Jet2::require_same_dim(const Jet2& a, const Jet2& b) {
    if (a.dim() != b.dim())
        throw DimensionMismatch("jet dimension mismatch: " + std::to_string(a.dim()) +
                                " vs " + std::to_string(b.dim()));
}

Jet2 Jet2::operator-() const {
    return Jet2(-value_, -grad_, -hess_);
}

Jet2& Jet2::operator+=(const Jet2& rhs) {
    require_same_dim(*this, rhs);
    value_ += rhs.value_;
    grad_ += rhs.grad_;
    hess_ += rhs.hess_;
    return *this;
}

Jet2& Jet2::operator-=(const Jet2& rhs) {
    require_same_dim(*this, rhs);
    value_ -= rhs.value_;
    grad_ -= rhs.grad_;
    hess_ -= rhs.hess_;
    return *this;
}

Jet2 operator+(const Jet2& a, const Jet2& b) {
    Jet2::require_same_dim(a, b);
    return Jet2(a.value_ + b.value_, a.grad_ + b.grad_, a.hess_ + b.hess_);
}

Jet2 operator-(const Jet2& a, const Jet2& b) {
    Jet2::require_same_dim(a, b);
    return Jet2(a.value_ - b.value_, a.grad_ - b.grad_, a.hess_ - b.hess_);
}

Jet2 operator*(const Jet2& a, const Jet2& b) {
    Jet2::require_same_dim(a, b);
    // (fg)'' = f''g + f'g' + g'f' + g''f
    Eigen::MatrixXd h = a.value_ * b.hess_ + b.value_ * a.hess_ + symmetric_pair(a.grad_, b.grad_);
    return Jet2(a.value_ * b.value_, a.value_ * b.grad_ + b.value_ * a.grad_, std::move(h));
}

Jet2 operator/(const Jet2& a, const Jet2& b) {
    Jet2::require_same_dim(a, b);
    if (b.value_ == 0.0)
        throw DomainError("division by zero");
    // a/b = a · (1/b); (1/b)' = -b'/b², (1/b)'' = -b''/b² + 2 b'b'ᵀ/b³
    const double inv = 1.0 / b.value_;
    const double inv2 = inv * inv;
    Jet2 recip(inv, -inv2 * b.grad_,
               -inv2 * b.hess_ + scaled_outer(2.0 * inv2 * inv, b.grad_));
    return a * recip;
}

Jet2 operator*(double s, const Jet2& a) { return Jet2(s * a.value_, s * a.grad_, s * a.hess_); }
Jet2 operator*(const Jet2& a, double s) { return s * a; }
Jet2 operator+(const Jet2& a, double s) { return Jet2(a.value_ + s, a.grad_, a.hess_); }
Jet2 operator+(double s, const Jet2& a) { return a + s; }
Jet2 operator-(const Jet2& a, double s) { return Jet2(a.value_ - s, a.grad_, a.hess_); }
Jet2 operator-(double s, const Jet2& a) { return Jet2(s - a.value_, -a.grad_, -a.hess_); }
Jet2 operator/(const Jet2& a, double s) {
    if (s == 0.0) throw DomainError("division by zero");
    return Jet2(a.value_ / s, a.grad_ / s, a.hess_ / s);
}
Jet2 operator/(double s, const Jet2& a) { return Jet2::constant(s, a.dim()) / a; }

Jet2 Jet2::chain(double g0, double g1, double g2) const {
    return Jet2(g0, g1 * grad_, g1 * hess_ + scaled_outer(g2, grad_));
}

Jet2 sin(const Jet2& a) {
    const double s = std::sin(a.value_), c = std::cos(a.value_);
    return a.chain(s, c, -s);
}

Jet2 cos(const Jet2& a) {
    const double s = std::sin(a.value_), c = std::cos(a.value_);
    return a.chain(c, -s, -c);
}

Jet2 exp(const Jet2& a) {
    const double e = std::exp(a.value_);
    return a.chain(e, e, e);
}

Jet2 sqrt(const Jet2& a) {
    if (!(a.value_ > 0.0))
        throw DomainError("sqrt of non-positive value " + std::to_string(a.value_));
    const double r = std::sqrt(a.value_);
    const double d1 = 0.5 / r;
    return a.chain(r, d1, -0.5 * d1 / a.value_);
}

Jet2 pow_const(const Jet2& a, double exponent) {
    // Integral exponents stay defined for non-positive bases; fractional ones
    // require a positive base.
    const bool integral = exponent == std::floor(exponent) && std::isfinite(exponent);
    if (!integral && !(a.value_ > 0.0))
        throw DomainError("pow of non-positive base " + std::to_string(a.value_) +
                          " with non-integral exponent " + std::to_string(exponent));
    if (a.value_ == 0.0 && exponent < 2.0 && exponent != 0.0 && exponent != 1.0)
        throw DomainError("pow at zero base with exponent " + std::to_string(exponent) +
                          " has a singular derivative");
    const double v = std::pow(a.value_, exponent);
    const double d1 = exponent == 0.0 ? 0.0 : exponent * std::pow(a.value_, exponent - 1.0);
    const double d2 = (exponent == 0.0 || exponent == 1.0)
                          ? 0.0
                          : exponent * (exponent - 1.0) * std::pow(a.value_, exponent - 2.0);
    return a.chain(v, d1, d2);
}

} // namespace immcheck
