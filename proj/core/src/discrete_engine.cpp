#include "tvl/discrete_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "tvl/errors.hpp"
#include "tvl/kkt_geometry.hpp"

namespace tvl {

namespace {

constexpr double kRoundoff = 8.0 * std::numeric_limits<double>::epsilon();
constexpr int kMaxBacktracks = 60;

struct Augmented {
  const ProblemDef& p;
  const Vec& anchor;
  double t;
  double weight;  // alpha / dt

  double value(const Vec& x) const {
    return p.objective(x, t) + 0.5 * weight * (x - anchor).squaredNorm();
  }
  Vec gradient(const Vec& x) const { return p.grad_objective(x, t) + weight * (x - anchor); }
};

double feasibility(const ProblemDef& p, const Vec& x, double t) {
  return p.m == 0 ? 0.0 : (p.constraints(x) - p.data_path(t)).norm();
}

}  // namespace

Vec regularized_step(const ProblemDef& p, const Vec& x_prev, double t_next, double dt,
                     const StepOptions& options) {
  if (!(dt > 1e-12 * p.horizon)) throw std::invalid_argument("regularized_step: degenerate dt");
  if (!x_prev.allFinite()) throw std::invalid_argument("regularized_step: x_prev is not finite");

  const Augmented aug{p, x_prev, t_next, p.alpha / dt};
  const double restore_tol = 1e-3 * options.feasibility_tol;

  Vec x = restore_feasibility(p, x_prev, t_next, restore_tol);
  double value = aug.value(x);
  const double base_step = dt / p.alpha;
  double step = base_step;
  Vec last_x;
  Vec last_direction;

  for (int it = 0; it < options.max_iterations; ++it) {
    const GeometryResult geo = geometry(p, x);
    const Vec direction = geo.projector * aug.gradient(x);
    const double grad_sq = direction.squaredNorm();
    if (std::sqrt(grad_sq) <= options.stationarity_tol &&
        feasibility(p, x, t_next) <= options.feasibility_tol) {
      return x;
    }
    if (last_x.size() != 0) {
      // Barzilai-Borwein step from the last move, kept within a sane range.
      const Vec s = x - last_x;
      const double sy = s.dot(direction - last_direction);
      step = sy > 0.0 ? std::clamp(s.squaredNorm() / sy, 1e-6 * base_step, 1e6 * base_step) : base_step;
    }
    last_x = x;
    last_direction = direction;

    bool accepted = false;
    for (int backtracks = 0; backtracks < kMaxBacktracks; ++backtracks, step *= options.shrink) {
      Vec trial;
      try {
        trial = restore_feasibility(p, x - step * direction, t_next, restore_tol);
      } catch (const NumericalError&) {
        continue;
      }
      const double trial_value = aug.value(trial);
      const double decrease = options.armijo_c * step * grad_sq;
      const double slack = kRoundoff * (1.0 + std::abs(value));
      bool ok = trial_value <= value - decrease;
      if (!ok && decrease <= slack && trial_value <= value + slack) {
        // Objective differences are below roundoff here; require the
        // projected gradient to shrink instead.
        ok = (geometry(p, trial).projector * aug.gradient(trial)).squaredNorm() < grad_sq;
      }
      if (ok) {
        x = std::move(trial);
        value = trial_value;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      std::ostringstream os;
      os << "regularized_step: line search failed at t = " << t_next
         << " with projected gradient norm " << std::sqrt(grad_sq);
      throw StepSolveError(os.str());
    }
  }

  std::ostringstream os;
  os << "regularized_step: no KKT point within " << options.max_iterations
     << " iterations at t = " << t_next;
  throw StepSolveError(os.str());
}

void check_kkt_start(const ProblemDef& p, const Vec& x0, double tol) {
  if (x0.size() != p.n) throw InitializationError("initial point has wrong dimension");
  if (!x0.allFinite()) throw InitializationError("initial point is not finite");
  const KktResidual res = kkt_residual(p, x0, 0.0);
  if (res.stationarity_norm > tol || res.feasibility_norm > tol) {
    std::ostringstream os;
    os << "initial point is not a KKT point at t = 0 (stationarity " << res.stationarity_norm
       << ", feasibility " << res.feasibility_norm << ", tolerance " << tol << ")";
    throw InitializationError(os.str());
  }
}

Trajectory discrete_trajectory(const ProblemDef& p, const Vec& x0, int steps,
                               const TrajectoryOptions& options) {
  check_problem(p);
  if (steps < 1) throw std::invalid_argument("discrete_trajectory: need at least one step");
  if (options.check_start) {
    check_kkt_start(p, x0, options.start_tol);
  } else if (x0.size() != p.n) {
    throw InitializationError("initial point has wrong dimension");
  }

  const double dt = p.horizon / steps;
  Trajectory traj;
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  traj.diagnostics.reserve(steps + 1);

  traj.times.push_back(0.0);
  traj.states.push_back(x0);
  traj.diagnostics.push_back(diagnose(p, x0, 0.0, 0.0));

  for (int k = 1; k <= steps; ++k) {
    const double t = k == steps ? p.horizon : k * dt;
    Vec next = regularized_step(p, traj.states.back(), t, dt, options.step);
    const double step_norm = (next - traj.states.back()).norm();
    traj.diagnostics.push_back(diagnose(p, next, t, step_norm));
    traj.times.push_back(t);
    traj.states.push_back(std::move(next));
  }
  return traj;
}

}  // namespace tvl
