#pragma once

#include <limits>

#include "tvl/problem.hpp"

namespace tvl {

// Absolute LICQ threshold on sigma_min(J).
inline constexpr double kSingularityTolerance = 1e-8;

// Projection algebra of the constraint Jacobian at a point:
//   projector = I - J^T (J J^T)^{-1} J   (onto ker J)
//   theta     = J^T (J J^T)^{-1}         (right inverse of J)
struct GeometryResult {
  Mat jacobian;
  Mat projector;
  Mat theta;
  double sigma_min = std::numeric_limits<double>::infinity();
};

// m = 0 yields projector = I, an n x 0 theta and sigma_min = +inf.
// Throws SingularConstraintError when sigma_min < c_tol.
GeometryResult geometry(const ProblemDef& p, const Vec& x, double c_tol = kSingularityTolerance);

// Projected gradient P(x) grad_x f(x, t).
Vec eta(const ProblemDef& p, const Vec& x, double t);

// Right-hand side of the trajectory ODE: -eta(x, t) / alpha + theta(x) d_dot(t).
Vec ode_rhs(const ProblemDef& p, const Vec& x, double t);

struct KktResidual {
  double stationarity_norm = 0.0;
  double feasibility_norm = 0.0;
  Vec multipliers;  // least-squares multipliers mu = -(J J^T)^{-1} J grad f
};

KktResidual kkt_residual(const ProblemDef& p, const Vec& x, double t);

// Gauss-Newton (minimum-norm) iterations on h(x) = d(t). Returns the restored
// point; throws StepSolveError if the residual does not drop below `tol`.
Vec restore_feasibility(const ProblemDef& p, const Vec& x, double t, double tol = 1e-12,
                        int max_iterations = 50);

}  // namespace tvl
