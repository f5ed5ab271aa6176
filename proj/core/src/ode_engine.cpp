#include "tvl/ode_engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <boost/numeric/odeint.hpp>

#include "tvl/errors.hpp"
#include "tvl/kkt_geometry.hpp"

namespace tvl {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::vector<double>;

State to_state(const Vec& v) { return State(v.data(), v.data() + v.size()); }

Vec to_vec(const State& s) { return Eigen::Map<const Vec>(s.data(), static_cast<Eigen::Index>(s.size())); }

// Frozen-time vector field; m = 0 skips the projection algebra.
Vec frozen_field(const ProblemDef& p, const Vec& x, double t, bool include_data_rate) {
  if (p.m == 0) return -p.grad_objective(x, t) / p.alpha;
  const GeometryResult geo = geometry(p, x);
  Vec rhs = -(geo.projector * p.grad_objective(x, t)) / p.alpha;
  if (include_data_rate) rhs += geo.theta * p.data_rate(t);
  return rhs;
}

Vec trajectory_field(const ProblemDef& p, const Vec& x, double t) {
  return frozen_field(p, x, t, /*include_data_rate=*/true);
}

Mat fd_jacobian(const ProblemDef& p, const Vec& y, double t) {
  Mat jac(p.n, p.n);
  for (int j = 0; j < p.n; ++j) {
    const double h = 1e-7 * (1.0 + std::abs(y(j)));
    Vec yp = y, ym = y;
    yp(j) += h;
    ym(j) -= h;
    jac.col(j) = (trajectory_field(p, yp, t) - trajectory_field(p, ym, t)) / (2.0 * h);
  }
  return jac;
}

void check_start(const ProblemDef& p, const Vec& x0, bool enabled, double tol) {
  if (enabled) {
    check_kkt_start(p, x0, tol);
  } else if (x0.size() != p.n) {
    throw InitializationError("initial point has wrong dimension");
  }
}

}  // namespace

Trajectory backward_euler_trajectory(const ProblemDef& p, const Vec& x0, double dt,
                                     const ImplicitOptions& options) {
  check_problem(p);
  if (!(dt > 1e-12 * p.horizon)) throw std::invalid_argument("backward_euler_trajectory: degenerate dt");
  check_start(p, x0, options.check_start, options.start_tol);

  const double T = p.horizon;
  const double grid_tol = 1e-12 * T;
  long full_steps = static_cast<long>(std::floor(T / dt * (1.0 + 1e-12)));
  std::vector<double> times{0.0};
  for (long k = 1; k <= full_steps; ++k) times.push_back(k * dt);
  if (T - times.back() > grid_tol) {
    times.push_back(T);
  } else {
    times.back() = T;
  }

  Trajectory traj;
  traj.times = times;
  traj.states.reserve(times.size());
  traj.diagnostics.reserve(times.size());
  traj.states.push_back(x0);
  traj.diagnostics.push_back(diagnose(p, x0, 0.0, 0.0));

  const Mat identity = Mat::Identity(p.n, p.n);
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double t = times[k];
    const double h = t - times[k - 1];
    const Vec& prev = traj.states.back();
    auto residual = [&](const Vec& y) -> Vec { return y - prev - h * trajectory_field(p, y, t); };

    Vec y = prev;
    try {
      y = prev + h * trajectory_field(p, prev, t);
    } catch (const SingularConstraintError&) {
      y = prev;
    }
    Vec r = residual(y);
    double r_norm = r.norm();
    int it = 0;
    for (; it < options.max_newton_iterations && r_norm > options.residual_tol; ++it) {
      const Mat jac = identity - h * fd_jacobian(p, y, t);
      const Vec delta = jac.partialPivLu().solve(-r);
      double lambda = 1.0;
      bool improved = false;
      for (int halvings = 0; halvings < 30; ++halvings, lambda *= 0.5) {
        const Vec trial = y + lambda * delta;
        Vec trial_r;
        try {
          trial_r = residual(trial);
        } catch (const SingularConstraintError&) {
          continue;
        }
        const double trial_norm = trial_r.norm();
        if (trial_norm < r_norm) {
          y = trial;
          r = std::move(trial_r);
          r_norm = trial_norm;
          improved = true;
          break;
        }
      }
      if (!improved) break;
    }
    if (!(r_norm <= options.residual_tol)) {
      std::ostringstream os;
      os << "backward Euler: implicit step at t = " << t << " stalled with residual " << r_norm;
      throw ImplicitSolveError(os.str());
    }
    StepDiagnostics diag = diagnose(p, y, t, (y - prev).norm());
    diag.inner_residual = r_norm;
    traj.diagnostics.push_back(diag);
    traj.states.push_back(std::move(y));
  }
  return traj;
}

Trajectory integrate_reference(const ProblemDef& p, const Vec& x0, const ReferenceOptions& options) {
  check_problem(p);
  if (options.intervals < 1) throw std::invalid_argument("integrate_reference: need intervals >= 1");
  check_start(p, x0, options.check_start, options.start_tol);

  const double T = p.horizon;
  auto system = [&p](const State& x, State& dxdt, double t) {
    const Vec rhs = trajectory_field(p, to_vec(x), t);
    dxdt.assign(rhs.data(), rhs.data() + rhs.size());
  };

  auto stepper = odeint::make_dense_output(options.abs_tol, options.rel_tol,
                                           odeint::runge_kutta_dopri5<State>());
  State x = to_state(x0);
  stepper.initialize(x, 0.0, std::min(1e-3, T / options.intervals));

  Trajectory traj;
  traj.times.reserve(options.intervals + 1);
  traj.states.reserve(options.intervals + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(x0);
  traj.diagnostics.push_back(diagnose(p, x0, 0.0, 0.0));

  State sample(x.size());
  try {
    for (int k = 1; k <= options.intervals; ++k) {
      const double t = k == options.intervals ? T : T * k / options.intervals;
      while (stepper.current_time() < t) {
        stepper.do_step(system);
        const State& now = stepper.current_state();
        if (!std::all_of(now.begin(), now.end(), [](double v) { return std::isfinite(v); })) {
          std::ostringstream os;
          os << "reference integrator: state became non-finite near t = " << stepper.current_time();
          throw StiffnessError(os.str());
        }
        if (stepper.current_time_step() < 1e-13 * T) {
          std::ostringstream os;
          os << "reference integrator: step size collapsed near t = " << stepper.current_time();
          throw StiffnessError(os.str());
        }
      }
      stepper.calc_state(t, sample);
      Vec state = to_vec(sample);
      traj.diagnostics.push_back(diagnose(p, state, t, (state - traj.states.back()).norm()));
      traj.times.push_back(t);
      traj.states.push_back(std::move(state));
    }
  } catch (const odeint::odeint_error& e) {
    throw StiffnessError(std::string("reference integrator: ") + e.what());
  }
  return traj;
}

FlowResult frozen_time_flow(const ProblemDef& p, const Vec& x, double t, double s_max, double tol,
                            const FlowOptions& options) {
  if (x.size() != p.n) throw std::invalid_argument("frozen_time_flow: wrong dimension");
  if (!(s_max > 0.0) || !(tol > 0.0)) throw std::invalid_argument("frozen_time_flow: need s_max, tol > 0");

  auto system = [&](const State& state, State& dxds, double) {
    const Vec rhs = frozen_field(p, to_vec(state), t, options.include_data_rate);
    dxds.assign(rhs.data(), rhs.data() + rhs.size());
  };

  FlowResult out;
  State state = to_state(x);
  State deriv(state.size());
  system(state, deriv, 0.0);
  if (options.record_path) out.path.push_back(x);

  auto norm = [](const State& v) {
    double acc = 0.0;
    for (double c : v) acc += c * c;
    return std::sqrt(acc);
  };

  auto stepper = odeint::make_controlled(options.abs_tol, options.rel_tol,
                                         odeint::runge_kutta_dopri5<State>());
  double s = 0.0;
  double ds = std::min(1e-2 * p.alpha, s_max);
  int consecutive_failures = 0;
  while (norm(deriv) > tol && s < s_max) {
    ds = std::min(ds, s_max - s);
    if (ds < 1e-13 * s_max) break;
    const odeint::controlled_step_result res = stepper.try_step(system, state, deriv, s, ds);
    if (res == odeint::fail) {
      if (++consecutive_failures > 500) break;
      continue;
    }
    consecutive_failures = 0;
    if (options.record_path) out.path.push_back(to_vec(state));
  }
  out.limit = to_vec(state);
  out.converged = norm(deriv) <= tol;
  out.s_final = s;
  return out;
}

FlowResult frozen_time_flow(const ProblemDef& p, const Vec& x, double t, const FlowOptions& options) {
  return frozen_time_flow(p, x, t, 100.0 * p.alpha, 1e-8, options);
}

std::vector<ConvergenceRow> convergence_study(const ProblemDef& p, const Vec& x0,
                                              const std::vector<double>& dts,
                                              const ConvergenceOptions& options) {
  for (std::size_t i = 1; i < dts.size(); ++i) {
    if (!(dts[i] < dts[i - 1])) throw std::invalid_argument("convergence_study: dts must be decreasing");
  }
  std::vector<ConvergenceRow> rows;
  for (double dt : dts) {
    if (!(dt > 0.0)) throw std::invalid_argument("convergence_study: dt must be positive");
    ConvergenceRow row;
    row.steps = std::max(1, static_cast<int>(std::lround(p.horizon / dt)));
    row.dt = p.horizon / row.steps;

    ReferenceOptions ref_options = options.reference;
    ref_options.intervals = row.steps;
    const Trajectory reference = integrate_reference(p, x0, ref_options);
    const Trajectory discrete = discrete_trajectory(p, x0, row.steps, options.discrete);
    const Trajectory implicit = backward_euler_trajectory(p, x0, row.dt, options.implicit);

    row.discrete_error = sup_distance(discrete, reference);
    row.backward_euler_error = sup_distance(implicit, reference);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace tvl
