#pragma once

#include <complex>
#include <vector>

#include "tvl/problem.hpp"
#include "tvl/trajectory.hpp"

namespace tvl {

inline constexpr double kZeroTolerance = 1e-8;

// Eigenvalue census of a square matrix. Thresholds are relative:
// thr = zero_tol * scale with scale = max(1, |M|_F).
//   n_zero: |Re lambda| <= thr      n_neg: Re lambda < -thr      n_pos: Re lambda > thr
// so n_zero + n_neg + n_pos = n. n_null additionally counts |lambda| <= thr,
// which separates true zeros from purely imaginary pairs.
struct SpectrumReport {
  std::vector<std::complex<double>> eigenvalues;
  int n_zero = 0;
  int n_neg = 0;
  int n_pos = 0;
  int n_null = 0;
  double scale = 1.0;
  double max_real() const;
};

// Balanced Hessenberg/real-Schur eigen decomposition (n <= 64).
// Throws EigenConvergenceError if the QR iteration does not converge.
SpectrumReport eigen_report(const Mat& M, double zero_tol = kZeroTolerance);

// -(1/alpha) (hess f(z, t) + sum_i mu_i H_i(z)) P(z), mu the least-squares
// multipliers at (z, t). Throws MissingHessianError without second derivatives.
Mat invariant_jacobian(const ProblemDef& p, const Vec& z, double t);

struct VariantJacobian {
  Mat k1;
  Mat k2;
  Mat total() const { return k1 + k2; }
};

// Jacobian of ode_rhs at a KKT point, split as K1 + K2:
//   K1 = -(1/alpha) P(z) (hess f + sum_i mu_i H_i), the derivative of
//        -eta / alpha (the transpose of invariant_jacobian, same spectrum)
//   K2 = d/dz [Q(z) d_dot(t)] with Q = J^T (J J^T)^{-1}, one column per
//        coordinate of z; K2 = 0 when m = 0.
VariantJacobian variant_jacobian(const ProblemDef& p, const Vec& z, double t);

// Smallest eigenvalue of the Lagrangian Hessian restricted to ker J(z),
// +inf when the tangent space is trivial.
double tangent_hessian_min_eigenvalue(const ProblemDef& p, const Vec& z, double t);

// Second-order sufficient condition with margin 1e-8.
bool satisfies_sosc(const ProblemDef& p, const Vec& z, double t, double margin = 1e-8);

struct SpectrumSample {
  double t = 0.0;
  double max_real = 0.0;
  int n_pos = 0;
  int n_zero = 0;
  int n_neg = 0;
  bool flagged = false;  // n_pos > 0
};

// Spectrum of K1 + K2 at every state of a KKT trajectory. Throws
// InitializationError if a state violates the KKT tolerance.
std::vector<SpectrumSample> spectrum_along_trajectory(const ProblemDef& p, const Trajectory& ztraj,
                                                      double kkt_tol = 1e-6,
                                                      double zero_tol = kZeroTolerance);

// KKT path z(t_j) on a uniform grid of `samples` intervals: each point is the
// limit of the projected gradient flow (no data drift) at t_j, warm-started
// from the previous point after restoring feasibility.
Trajectory track_kkt_path(const ProblemDef& p, const Vec& z0, int samples);

}  // namespace tvl
