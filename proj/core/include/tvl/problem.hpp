#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace tvl {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

using ObjectiveFn = std::function<double(const Vec&, double)>;
using GradientFn = std::function<Vec(const Vec&, double)>;
using HessianFn = std::function<Mat(const Vec&, double)>;
using ConstraintFn = std::function<Vec(const Vec&)>;
using JacobianFn = std::function<Mat(const Vec&)>;
using ConstraintHessiansFn = std::function<std::vector<Mat>(const Vec&)>;
using DataFn = std::function<Vec(double)>;

// Time-varying equality-constrained problem
//
//   minimize f(x, t)  subject to  h(x) = d(t),  t in [0, T],
//
// together with the proximal weight alpha of the regularized sequence of
// problems. All maps must be pure; a ProblemDef is shared read-only across
// worker threads.
struct ProblemDef {
  std::string name;
  int n = 0;
  int m = 0;

  ObjectiveFn objective;
  GradientFn grad_objective;
  HessianFn hess_objective;  // optional, needed by the spectrum module

  ConstraintFn constraints;
  JacobianFn jacobian;
  ConstraintHessiansFn constraint_hessians;  // optional

  DataFn data_path;
  DataFn data_rate;

  double horizon = 0.0;
  double alpha = 1.0;

  bool has_hessians() const {
    return static_cast<bool>(hess_objective) && (m == 0 || static_cast<bool>(constraint_hessians));
  }

  // Evaluators that handle the unconstrained case uniformly.
  Vec h(const Vec& x) const;
  Mat J(const Vec& x) const;
  Vec d(double t) const;
  Vec d_dot(double t) const;
};

// Throws std::invalid_argument unless alpha > 0, T > 0, n >= 1, 0 <= m <= n
// and the required maps are present.
void check_problem(const ProblemDef& p);

// One-dimensional function with exactly three stationary points
// y1 < y2 < y3 (two minima around a maximum), g(y1) > g(y3).
struct Scalar1DFunction {
  std::function<double(double)> g;
  std::function<double(double)> dg;
  std::function<double(double)> d2g;
  double y1 = 0.0;
  double y2 = 0.0;
  double y3 = 0.0;
};

// Smooth map R^n -> R with derivatives, used by the damped-sinusoid family.
struct ScalarField {
  int n = 0;
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
  std::function<Mat(const Vec&)> hessian;  // optional
};

// g(y) = y^4/4 + y^3/8 - 2 y^2 - 3y/2 + 8.
Scalar1DFunction example1_quartic();

struct Example1 {
  ProblemDef problem;
  Scalar1DFunction g;
};

// f(x, t) = g(x - beta sin t) on [0, 2 pi], unconstrained, n = 1.
Example1 make_example1(double beta, double alpha = 1.0);

// Rank-one dynamic matrix sensing written as an equality-constrained problem
// over x = (X in R^2, eps in R^4):  min |eps|^2  s.t. <A_i, X X^T> - eps_i = d_i(t).
// consistent_data = true sets d(t) := <A_i, Z(t) Z(t)^T> for
// Z(t) = (0.8 + 0.2 cos t, 0.2 sin t); false uses the printed d(t) with d_3 = 0.
ProblemDef make_matrix_recovery(bool consistent_data = true, double alpha = 1.0);

// Sensing matrices A_1..A_4 (2x2, as printed; A_3 is not symmetric).
const std::vector<Eigen::Matrix2d>& matrix_recovery_sensing();

// Z(t) and its time derivative.
Eigen::Vector2d matrix_recovery_global(double t);
Eigen::Vector2d matrix_recovery_global_rate(double t);

// f(x, t) = g(x - beta e^{-lambda t} sin(omega t) u), unconstrained.
// Throws std::invalid_argument if |u| differs from 1 by more than 1e-12.
ProblemDef make_damped_sinusoid(const ScalarField& g, double beta, double omega, double lambda,
                                const Vec& u, double horizon = 2.0 * 3.14159265358979323846,
                                double alpha = 1.0);

// n-dimensional lift of the Example 1 quartic: g(y) = q(y_0) + |y_{1:}|^2 / 2.
// Spurious minimum at (-2, 0, ..., 0), global at (2, 0, ..., 0).
ScalarField quartic_field(int n);

struct DerivativeCheck {
  std::string name;
  double max_rel_deviation = 0.0;
  bool passed = true;
};

struct ValidationReport {
  int samples = 0;
  std::uint64_t seed = 0;
  std::vector<DerivativeCheck> checks;
  std::vector<std::string> invariant_failures;
  bool passed() const;
};

// Compares every supplied derivative against central finite differences
// at `samples` random (x, t) points drawn deterministically from `seed`.
// Deviations above 1e-5 are reported, not thrown.
ValidationReport validate_problem(const ProblemDef& p, int samples, std::uint64_t seed,
                                  double box_half_width = 3.0);

}  // namespace tvl
