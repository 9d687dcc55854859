#pragma once

#include <Eigen/Dense>

#include "immcheck/errors.hpp"

namespace immcheck {

/// Second-order jet of a scalar quantity with respect to m chart coordinates:
/// value, gradient and Hessian, propagated exactly through arithmetic and
/// elementary functions. The Hessian is kept bit-exactly symmetric: every
/// operation computes the upper triangle once and mirrors it.
class Jet2 {
public:
    Jet2() = default;

    /// Constant with respect to all m coordinates.
    static Jet2 constant(double value, int m);

    /// Jet of the coordinate function x_index at the given point.
    static Jet2 seed(const Eigen::VectorXd& point, int index);

    /// Assemble a jet from raw parts. The Hessian is symmetrized on write by
    /// mirroring its upper triangle.
    static Jet2 from_parts(double value, Eigen::VectorXd grad, Eigen::MatrixXd hess);

    double value() const { return value_; }
    const Eigen::VectorXd& grad() const { return grad_; }
    const Eigen::MatrixXd& hess() const { return hess_; }
    int dim() const { return static_cast<int>(grad_.size()); }

    Jet2 operator-() const;
    Jet2& operator+=(const Jet2& rhs);
    Jet2& operator-=(const Jet2& rhs);

    friend Jet2 operator+(const Jet2& a, const Jet2& b);
    friend Jet2 operator-(const Jet2& a, const Jet2& b);
    friend Jet2 operator*(const Jet2& a, const Jet2& b);
    friend Jet2 operator/(const Jet2& a, const Jet2& b);

    friend Jet2 operator*(double s, const Jet2& a);
    friend Jet2 operator*(const Jet2& a, double s);
    friend Jet2 operator+(const Jet2& a, double s);
    friend Jet2 operator+(double s, const Jet2& a);
    friend Jet2 operator-(const Jet2& a, double s);
    friend Jet2 operator-(double s, const Jet2& a);
    friend Jet2 operator/(const Jet2& a, double s);
    friend Jet2 operator/(double s, const Jet2& a);

    friend Jet2 sin(const Jet2& a);
    friend Jet2 cos(const Jet2& a);
    friend Jet2 exp(const Jet2& a);
    friend Jet2 sqrt(const Jet2& a);
    friend Jet2 pow_const(const Jet2& a, double exponent);

private:
    Jet2(double value, Eigen::VectorXd grad, Eigen::MatrixXd hess)
        : value_(value), grad_(std::move(grad)), hess_(std::move(hess)) {}

    /// Chain rule for a scalar function g applied to this jet:
    /// hess = g''·grad gradᵀ + g'·hess, written symmetrically.
    Jet2 chain(double g0, double g1, double g2) const;

    static void require_same_dim(const Jet2& a, const Jet2& b);

    double value_ = 0.0;
    Eigen::VectorXd grad_;
    Eigen::MatrixXd hess_;
};

} // namespace immcheck
