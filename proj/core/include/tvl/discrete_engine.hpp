#pragma once

#include "tvl/problem.hpp"
#include "tvl/trajectory.hpp"

namespace tvl {

// Inner solver for one proximal step: projected gradient descent on
//   F(x) = f(x, t) + alpha |x - x_prev|^2 / (2 dt)   s.t.  h(x) = d(t),
// with a feasibility-restoring Newton correction after each gradient move
// and Armijo backtracking.
struct StepOptions {
  double stationarity_tol = 1e-9;
  double feasibility_tol = 1e-9;
  int max_iterations = 10000;
  double armijo_c = 1e-4;
  double shrink = 0.5;
};

// Returns the KKT point of the regularized problem reached by descent from
// x_prev. Throws StepSolveError when the budget is exhausted.
Vec regularized_step(const ProblemDef& p, const Vec& x_prev, double t_next, double dt,
                     const StepOptions& options = {});

struct TrajectoryOptions {
  StepOptions step;
  // Required KKT residual of the starting point at t = 0.
  double start_tol = 1e-8;
  // Disabling this allows non-KKT starts (e.g. convergence tests on f = x^2/2).
  bool check_start = true;
};

// Throws InitializationError unless x0 is feasible and stationary at t = 0.
void check_kkt_start(const ProblemDef& p, const Vec& x0, double tol);

// Discrete local trajectory on t_k = k T / N, k = 0..N.
Trajectory discrete_trajectory(const ProblemDef& p, const Vec& x0, int steps,
                               const TrajectoryOptions& options = {});

}  // namespace tvl
