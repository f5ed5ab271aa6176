#include "tvl/kkt_geometry.hpp"

#include <sstream>

#include "tvl/errors.hpp"

namespace tvl {

GeometryResult geometry(const ProblemDef& p, const Vec& x, double c_tol) {
  GeometryResult out;
  if (p.m == 0) {
    out.jacobian = Mat(0, p.n);
    out.projector = Mat::Identity(p.n, p.n);
    out.theta = Mat(p.n, 0);
    return out;
  }
  out.jacobian = p.jacobian(x);
  const Mat& jac = out.jacobian;

  Eigen::JacobiSVD<Mat> svd(jac);
  out.sigma_min = svd.singularValues()(p.m - 1);
  if (!(out.sigma_min >= c_tol)) throw SingularConstraintError(out.sigma_min, c_tol);

  // theta^T = (J J^T)^{-1} J, solved with a pivoted LDL^T of the Gram matrix.
  const Mat gram = jac * jac.transpose();
  const Eigen::LDLT<Mat> ldlt(gram);
  out.theta = ldlt.solve(jac).transpose();
  const Mat range = out.theta * jac;
  out.projector = Mat::Identity(p.n, p.n) - 0.5 * (range + range.transpose());
  return out;
}

Vec eta(const ProblemDef& p, const Vec& x, double t) {
  const GeometryResult geo = geometry(p, x);
  return geo.projector * p.grad_objective(x, t);
}

Vec ode_rhs(const ProblemDef& p, const Vec& x, double t) {
  const GeometryResult geo = geometry(p, x);
  Vec rhs = -(geo.projector * p.grad_objective(x, t)) / p.alpha;
  if (p.m > 0) rhs += geo.theta * p.data_rate(t);
  return rhs;
}

KktResidual kkt_residual(const ProblemDef& p, const Vec& x, double t) {
  const GeometryResult geo = geometry(p, x);
  const Vec grad = p.grad_objective(x, t);
  KktResidual out;
  if (p.m == 0) {
    out.multipliers = Vec(0);
    out.stationarity_norm = grad.norm();
    out.feasibility_norm = 0.0;
    return out;
  }
  // theta^T grad = (J J^T)^{-1} J grad
  out.multipliers = -(geo.theta.transpose() * grad);
  out.stationarity_norm = (grad + geo.jacobian.transpose() * out.multipliers).norm();
  out.feasibility_norm = (p.constraints(x) - p.data_path(t)).norm();
  return out;
}

Vec restore_feasibility(const ProblemDef& p, const Vec& x, double t, double tol, int max_iterations) {
  if (p.m == 0) return x;
  const Vec target = p.data_path(t);
  Vec y = x;
  Vec residual = p.constraints(y) - target;
  double norm = residual.norm();
  for (int it = 0; it < max_iterations && norm > tol; ++it) {
    const GeometryResult geo = geometry(p, y);
    const Vec step = geo.theta * residual;
    double scale = 1.0;
    for (int k = 0; k < 30; ++k, scale *= 0.5) {
      const Vec trial = y - scale * step;
      const Vec trial_residual = p.constraints(trial) - target;
      const double trial_norm = trial_residual.norm();
      if (trial_norm < norm || k == 29) {
        y = trial;
        residual = trial_residual;
        norm = trial_norm;
        break;
      }
    }
  }
  if (!(norm <= tol)) {
    std::ostringstream os;
    os << "feasibility restoration stalled at |h(x) - d(t)| = " << norm << " (t = " << t << ")";
    throw StepSolveError(os.str());
  }
  return y;
}

}  // namespace tvl
