#include "tvl/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tvl/kkt_geometry.hpp"

namespace tvl {

double Trajectory::max_step_rate() const {
  double rate = 0.0;
  for (std::size_t k = 1; k < size(); ++k) {
    const double dt = times[k] - times[k - 1];
    rate = std::max(rate, (states[k] - states[k - 1]).norm() / dt);
  }
  return rate;
}

StepDiagnostics diagnose(const ProblemDef& p, const Vec& x, double t, double step_norm) {
  const GeometryResult geo = geometry(p, x);
  StepDiagnostics diag;
  diag.kkt_stationarity_norm = (geo.projector * p.grad_objective(x, t)).norm();
  diag.feasibility_norm = p.m == 0 ? 0.0 : (p.constraints(x) - p.data_path(t)).norm();
  diag.sigma_min_jacobian = geo.sigma_min;
  diag.step_norm = step_norm;
  return diag;
}

double sup_distance(const Trajectory& a, const Trajectory& b) {
  if (a.size() != b.size()) throw std::invalid_argument("sup_distance: grids differ in length");
  double sup = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (std::abs(a.times[k] - b.times[k]) > 1e-9 * (1.0 + std::abs(a.times[k]))) {
      throw std::invalid_argument("sup_distance: grids differ in time");
    }
    sup = std::max(sup, (a.states[k] - b.states[k]).norm());
  }
  return sup;
}

}  // namespace tvl
