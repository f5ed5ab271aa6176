#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "tvl/problem.hpp"

namespace tvl::test {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// f = x^2 / 2 on [0, 2 pi], unconstrained.
inline ProblemDef quadratic(double alpha = 1.0, double horizon = kTwoPi) {
  ProblemDef p;
  p.name = "quadratic";
  p.n = 1;
  p.m = 0;
  p.objective = [](const Vec& x, double) { return 0.5 * x.squaredNorm(); };
  p.grad_objective = [](const Vec& x, double) { return x; };
  p.hess_objective = [](const Vec&, double) { return Mat::Identity(1, 1); };
  p.horizon = horizon;
  p.alpha = alpha;
  return p;
}

// n = 2, h(x) = x_0 = d(t); objective supplied by the caller.
inline ProblemDef axis_problem(std::function<double(const Vec&)> f, std::function<Vec(const Vec&)> grad,
                               std::function<double(double)> d, std::function<double(double)> d_dot,
                               double alpha = 1.0) {
  ProblemDef p;
  p.name = "axis";
  p.n = 2;
  p.m = 1;
  p.objective = [f](const Vec& x, double) { return f(x); };
  p.grad_objective = [grad](const Vec& x, double) { return grad(x); };
  p.hess_objective = [](const Vec&, double) { return Mat::Identity(2, 2); };
  p.constraints = [](const Vec& x) { return Vec::Constant(1, x(0)); };
  p.jacobian = [](const Vec&) {
    Mat j(1, 2);
    j << 1.0, 0.0;
    return j;
  };
  p.constraint_hessians = [](const Vec&) { return std::vector<Mat>{Mat::Zero(2, 2)}; };
  p.data_path = [d](double t) { return Vec::Constant(1, d(t)); };
  p.data_rate = [d_dot](double t) { return Vec::Constant(1, d_dot(t)); };
  p.horizon = kTwoPi;
  p.alpha = alpha;
  return p;
}

// Circle toy: minimize x_0 subject to |x|^2 = r(t)^2 with
// r(t) = 1 + amplitude sin(omega t). Minimizer (-r, 0), maximizer (r, 0).
inline ProblemDef circle(double amplitude = 0.2, double omega = 1.0, double alpha = 1.0) {
  ProblemDef p;
  p.name = "circle";
  p.n = 2;
  p.m = 1;
  p.objective = [](const Vec& x, double) { return x(0); };
  p.grad_objective = [](const Vec&, double) {
    Vec g(2);
    g << 1.0, 0.0;
    return g;
  };
  p.hess_objective = [](const Vec&, double) { return Mat::Zero(2, 2); };
  p.constraints = [](const Vec& x) { return Vec::Constant(1, x.squaredNorm()); };
  p.jacobian = [](const Vec& x) { return Mat(2.0 * x.transpose()); };
  p.constraint_hessians = [](const Vec&) { return std::vector<Mat>{2.0 * Mat::Identity(2, 2)}; };
  p.data_path = [amplitude, omega](double t) {
    const double r = 1.0 + amplitude * std::sin(omega * t);
    return Vec::Constant(1, r * r);
  };
  p.data_rate = [amplitude, omega](double t) {
    const double r = 1.0 + amplitude * std::sin(omega * t);
    return Vec::Constant(1, 2.0 * r * amplitude * omega * std::cos(omega * t));
  };
  p.horizon = kTwoPi;
  p.alpha = alpha;
  return p;
}

inline Vec vec(std::initializer_list<double> values) {
  Vec v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

// Matrix-recovery point with the given X and slack chosen so h(x) = d(t).
inline Vec matrec_feasible(const ProblemDef& p, double x1, double x2, double t) {
  Vec x = Vec::Zero(6);
  x(0) = x1;
  x(1) = x2;
  x.tail(4) = p.constraints(x) - p.data_path(t);
  return x;
}

// (Z(t), 0): the global trajectory under consistent data.
inline Vec matrec_global(double t) {
  Vec z = Vec::Zero(6);
  z.head(2) = matrix_recovery_global(t);
  return z;
}

}  // namespace tvl::test
