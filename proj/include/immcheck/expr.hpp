#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "immcheck/jet.hpp"

namespace immcheck {

enum class UnaryOp { Neg, Sin, Cos, Exp, Sqrt };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

/// Expression tree over chart coordinates x1..xm, named parameters and
/// literal constants. Nodes own their children; trees are move-only and
/// cloned explicitly.
struct ExprAst {
    enum class Kind { Constant, Variable, Parameter, Unary, Binary };

    Kind kind = Kind::Constant;
    double value = 0.0;          // Constant
    int var_index = -1;          // Variable, 0-based
    std::string param_name;      // Parameter
    UnaryOp unary_op = UnaryOp::Neg;
    BinaryOp binary_op = BinaryOp::Add;
    std::unique_ptr<ExprAst> lhs; // Unary operand / Binary left
    std::unique_ptr<ExprAst> rhs; // Binary right

    static ExprAst make_constant(double v);
    static ExprAst make_variable(int index);
    static ExprAst make_parameter(std::string name);
    static ExprAst make_unary(UnaryOp op, ExprAst operand);
    static ExprAst make_binary(BinaryOp op, ExprAst left, ExprAst right);

    ExprAst clone() const;

    /// True if no Variable node occurs in the subtree.
    bool is_variable_free() const;
};

/// A parsed immersion chart F: box ⊂ R^m → R^N with bound parameters.
struct ImmersionSpec {
    int m = 0;
    int N = 0;
    std::vector<ExprAst> components;                 // N entries
    std::map<std::string, double> params;            // name -> bound value
    std::vector<std::pair<double, double>> domain_box; // m (lo, hi) pairs

    ImmersionSpec clone() const;

    /// Rebind a declared parameter (CLI override). Unknown names are an error.
    void set_param(const std::string& name, double value);

    bool contains(const Eigen::VectorXd& point) const;
};

/// Parse an immersion source file. Grammar (one statement per `;`, `#` starts
/// a comment):
///
///   param <name>=<number>;        zero or more, before F
///   dim <m> -> <N>;
///   F = (<expr>, ..., <expr>);    N comma-separated expressions
///   box x1 in [lo,hi], ..., xm in [lo,hi];
///
/// Expressions use infix +,-,*,/,^ with standard precedence (^ binds tighter
/// than unary minus), functions sin, cos, exp, sqrt, and the predefined
/// constants pi and e. Literal subtrees are constant-folded; `^` exponents
/// must not depend on the coordinates.
ImmersionSpec parse(const std::string& source);

/// Canonical source text for a spec; parse(pretty_print(s)) evaluates
/// identically to s.
std::string pretty_print(const ImmersionSpec& spec);
std::string pretty_print(const ExprAst& ast);

/// Second-order jets of all N components of F at a point of the domain box.
std::vector<Jet2> eval_chart(const ImmersionSpec& spec, const Eigen::VectorXd& point);

/// Jet of a single scalar expression over x1..xm at a point.
Jet2 eval_scalar(const ExprAst& ast, const std::map<std::string, double>& params,
                 const Eigen::VectorXd& point);

/// Numeric value of a variable-free expression (parameters resolved).
double eval_constant(const ExprAst& ast, const std::map<std::string, double>& params);

/// Compose a spec with a constant linear map of the ambient space:
/// components of the result are (Q F)_a = sum_b Q(a,b) F_b. Used to apply
/// ambient rotations without touching the chart coordinates.
ImmersionSpec apply_linear_map(const ImmersionSpec& spec, const Eigen::MatrixXd& Q);

} // namespace immcheck
