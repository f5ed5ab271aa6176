#pragma once

#include <cstddef>
#include <vector>

#include "tvl/problem.hpp"

namespace tvl {

struct StepDiagnostics {
  double kkt_stationarity_norm = 0.0;  // |eta(x_k, t_k)|
  double feasibility_norm = 0.0;       // |h(x_k) - d(t_k)|
  double sigma_min_jacobian = 0.0;     // +inf when m = 0
  double step_norm = 0.0;              // |x_k - x_{k-1}|, 0 at k = 0
  double inner_residual = 0.0;         // implicit-equation residual (backward Euler only)
};

// Time grid on [0, T] with one state per grid time.
struct Trajectory {
  std::vector<double> times;
  std::vector<Vec> states;
  std::vector<StepDiagnostics> diagnostics;

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
  const Vec& final_state() const { return states.back(); }

  // Largest |x_k - x_{k-1}| / (t_k - t_{k-1}).
  double max_step_rate() const;
};

// Evaluates the per-point diagnostics (geometry must succeed at x).
StepDiagnostics diagnose(const ProblemDef& p, const Vec& x, double t, double step_norm);

// Sup over common grid indices of |a_k - b_k|. Throws std::invalid_argument
// when the grids differ in length or times by more than 1e-9.
double sup_distance(const Trajectory& a, const Trajectory& b);

}  // namespace tvl
