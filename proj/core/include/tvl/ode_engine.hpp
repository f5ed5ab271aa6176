#pragma once

#include <vector>

#include "tvl/discrete_engine.hpp"
#include "tvl/problem.hpp"
#include "tvl/trajectory.hpp"

namespace tvl {

struct ImplicitOptions {
  double residual_tol = 1e-10;
  int max_newton_iterations = 50;
  double start_tol = 1e-8;
  bool check_start = true;
};

// Backward Euler for x' = ode_rhs(x, t) on t_k = k dt (the last step is
// shortened to land on T). Each step solves
//   y_k = y_{k-1} + dt ode_rhs(y_k, t_k)
// by damped Newton with a finite-difference Jacobian.
Trajectory backward_euler_trajectory(const ProblemDef& p, const Vec& x0, double dt,
                                     const ImplicitOptions& options = {});

struct ReferenceOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-9;
  int intervals = 1000;  // dense output sampled at T k / intervals
  double start_tol = 1e-8;
  bool check_start = true;
};

// Adaptive Dormand-Prince 5(4) integration with dense output. Throws
// StiffnessError when the step size collapses below 1e-13 T.
Trajectory integrate_reference(const ProblemDef& p, const Vec& x0, const ReferenceOptions& options = {});

struct FlowOptions {
  // Keep the theta(x) d_dot(t) drift with d_dot frozen at t. For m >= 1 and
  // d_dot(t) != 0 the frozen flow then has no equilibrium (J x' = d_dot).
  bool include_data_rate = true;
  bool record_path = false;
  // Tight enough that stepper noise near an equilibrium stays well below tol.
  double rel_tol = 1e-12;
  double abs_tol = 1e-12;
};

struct FlowResult {
  Vec limit;
  bool converged = false;
  double s_final = 0.0;
  std::vector<Vec> path;  // accepted states when record_path is set
};

// Integrates dx/ds = -eta(x, t) / alpha + theta(x) d_dot(t) with t frozen,
// until |dx/ds| <= tol or s = s_max.
FlowResult frozen_time_flow(const ProblemDef& p, const Vec& x, double t, double s_max, double tol,
                            const FlowOptions& options = {});

// Defaults s_max = 100 alpha, tol = 1e-8.
FlowResult frozen_time_flow(const ProblemDef& p, const Vec& x, double t, const FlowOptions& options = {});

struct ConvergenceRow {
  double dt = 0.0;  // effective step T / N
  int steps = 0;
  double discrete_error = 0.0;
  double backward_euler_error = 0.0;
};

struct ConvergenceOptions {
  TrajectoryOptions discrete;
  ImplicitOptions implicit;
  ReferenceOptions reference;
};

// Sup-grid errors of the discrete and backward-Euler trajectories against
// the reference solution, one row per requested dt (rounded to T / N).
std::vector<ConvergenceRow> convergence_study(const ProblemDef& p, const Vec& x0,
                                              const std::vector<double>& dts,
                                              const ConvergenceOptions& options = {});

}  // namespace tvl
