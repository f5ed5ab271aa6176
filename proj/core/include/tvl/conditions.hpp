#pragma once

#include <optional>
#include <vector>

#include "tvl/problem.hpp"

namespace tvl {

// Escape conditions for f(x, t) = g(x - beta sin t) with a one-dimensional
// double-well g:
//   cond1: alpha beta >= C = max_{y1 <= y <= y3} g'(y)
//   cond2: m1 < y1 < m2 exist with g'(m1) = g'(m2) = -alpha beta
//   cond3: -C/alpha (t2 - t1) - beta (sin t2 - sin t1) + m1 >= m2,
//          cos t1 = cos t2 = -C / (alpha beta), t1 in (0, pi], t2 = 2 pi - t1
struct Prop1Report {
  double alpha = 0.0;
  double beta = 0.0;
  double C = 0.0;
  std::optional<double> m1;
  std::optional<double> m2;
  std::optional<double> t1;
  std::optional<double> t2;
  std::optional<double> cond3_lhs;
  bool cond1 = false;
  bool cond2 = false;
  bool cond3 = false;
  bool satisfied = false;
};

// C by 10^4-point sampling of g' on [y1, y3] plus Brent refinement.
double prop1_max_slope(const Scalar1DFunction& g, int samples = 10000);

// Constants only (booleans left false). Throws RootBracketError when g'
// never reaches -alpha beta on one side of y1.
Prop1Report prop1_constants(const Scalar1DFunction& g, double alpha, double beta);

// Full check; a missing m1/m2 makes cond2 and cond3 false.
Prop1Report prop1_check(const Scalar1DFunction& g, double alpha, double beta);

struct RegionCell {
  double alpha = 0.0;
  double beta = 0.0;
  bool satisfied = false;
  bool failed = false;  // evaluation error, counted as not satisfied
};

// Row-major over alpha_grid x beta_grid.
std::vector<RegionCell> prop1_region(const Scalar1DFunction& g, const std::vector<double>& alpha_grid,
                                     const std::vector<double>& beta_grid);

// Escape conditions for f(x, t) = g(x - beta e^{-lambda t} sin(omega t) u):
//   C1 = max over the balls B(y_i, R) of |grad g|
//   C2 = min over unit d and i of <grad g(y_i - R d), d>
//   cond1: 2 alpha omega (beta e^{-lambda pi / (2 omega)} - R) / pi > C1
//   cond2: alpha beta e^{-lambda R alpha / (C1 + alpha beta omega)} sqrt(lambda^2 + omega^2) < C2
//   necessary: alpha beta sqrt(omega^2 + lambda^2) >= -C2
struct Thm3Report {
  double C1 = 0.0;
  double C2 = 0.0;
  double R = 0.0;
  double cond1_lhs = 0.0;
  double cond2_lhs = 0.0;
  bool cond1 = false;
  bool cond2 = false;
  bool necessary_ok = false;
  bool satisfied = false;
};

struct Thm3Options {
  int ball_samples = 10000;
  int sphere_samples = 1000;
};

Thm3Report thm3_check(const ScalarField& g, const std::vector<Vec>& minima, double R, double alpha,
                      double beta, double omega, double lambda, const Thm3Options& options = {});

}  // namespace tvl
