#include "tvl/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "tvl/errors.hpp"
#include "tvl/kkt_geometry.hpp"
#include "tvl/ode_engine.hpp"

namespace tvl {

namespace {

// Parlett-Reinsch balancing with power-of-two scalings; returns D^{-1} M D.
Mat balance(Mat a) {
  const Eigen::Index n = a.rows();
  constexpr double radix = 2.0;
  bool converged = false;
  while (!converged) {
    converged = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = 0.0, r = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double f = 1.0;
      const double s = c + r;
      double g = r / radix;
      while (c < g) {
        f *= radix;
        c *= radix * radix;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= radix * radix;
      }
      if ((c + r) / f < 0.95 * s) {
        converged = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
  return a;
}

Mat lagrangian_hessian(const ProblemDef& p, const Vec& z, double t, const Vec& mu) {
  Mat lag = p.hess_objective(z, t);
  if (p.m > 0) {
    const std::vector<Mat> hs = p.constraint_hessians(z);
    for (int i = 0; i < p.m; ++i) lag += mu(i) * hs[i];
  }
  return lag;
}

void require_hessians(const ProblemDef& p) {
  if (!p.has_hessians()) {
    throw MissingHessianError("problem '" + p.name + "' does not provide second derivatives");
  }
}

}  // namespace

double SpectrumReport::max_real() const {
  double out = -std::numeric_limits<double>::infinity();
  for (const auto& ev : eigenvalues) out = std::max(out, ev.real());
  return out;
}

SpectrumReport eigen_report(const Mat& M, double zero_tol) {
  if (M.rows() != M.cols()) throw std::invalid_argument("eigen_report: matrix must be square");
  if (M.rows() > 64) throw std::invalid_argument("eigen_report: sized for n <= 64");

  SpectrumReport report;
  report.scale = std::max(1.0, M.norm());
  if (M.rows() == 0) return report;

  Eigen::EigenSolver<Mat> solver(balance(M), /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw EigenConvergenceError("eigen_report: QR iteration did not converge");
  }
  const double thr = zero_tol * report.scale;
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    const std::complex<double> ev = solver.eigenvalues()(i);
    report.eigenvalues.push_back(ev);
    if (ev.real() > thr) {
      ++report.n_pos;
    } else if (ev.real() < -thr) {
      ++report.n_neg;
    } else {
      ++report.n_zero;
    }
    if (std::abs(ev) <= thr) ++report.n_null;
  }
  std::sort(report.eigenvalues.begin(), report.eigenvalues.end(),
            [](const auto& a, const auto& b) {
              return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
            });
  return report;
}

Mat invariant_jacobian(const ProblemDef& p, const Vec& z, double t) {
  require_hessians(p);
  const GeometryResult geo = geometry(p, z);
  const KktResidual kkt = kkt_residual(p, z, t);
  return -(lagrangian_hessian(p, z, t, kkt.multipliers) * geo.projector) / p.alpha;
}

VariantJacobian variant_jacobian(const ProblemDef& p, const Vec& z, double t) {
  require_hessians(p);
  VariantJacobian out;
  {
    const GeometryResult geo = geometry(p, z);
    const KktResidual kkt = kkt_residual(p, z, t);
    out.k1 = -(geo.projector * lagrangian_hessian(p, z, t, kkt.multipliers)) / p.alpha;
  }
  out.k2 = Mat::Zero(p.n, p.n);
  if (p.m == 0) return out;

  const GeometryResult geo = geometry(p, z);
  const Mat& jac = geo.jacobian;
  const Mat& q = geo.theta;
  const Eigen::LDLT<Mat> gram(jac * jac.transpose());
  const Vec rate = p.data_rate(t);
  const Vec c = gram.solve(rate);  // (J J^T)^{-1} d_dot
  const std::vector<Mat> hs = p.constraint_hessians(z);

  for (int j = 0; j < p.n; ++j) {
    // dJ/dz_j: row i is the j-th column of H_i.
    Mat djac(p.m, p.n);
    for (int i = 0; i < p.m; ++i) djac.row(i) = hs[i].col(j).transpose();
    const Mat dgram = djac * jac.transpose() + jac * djac.transpose();
    // dQ/dz_j d_dot = dJ^T (J J^T)^{-1} d_dot - Q dG (J J^T)^{-1} d_dot
    out.k2.col(j) = djac.transpose() * c - q * (dgram * c);
  }
  return out;
}

double tangent_hessian_min_eigenvalue(const ProblemDef& p, const Vec& z, double t) {
  require_hessians(p);
  const KktResidual kkt = kkt_residual(p, z, t);
  const Mat lag = lagrangian_hessian(p, z, t, kkt.multipliers);
  Mat basis;
  if (p.m == 0) {
    basis = Mat::Identity(p.n, p.n);
  } else {
    const GeometryResult geo = geometry(p, z);
    Eigen::JacobiSVD<Mat> svd(geo.jacobian, Eigen::ComputeFullV);
    basis = svd.matrixV().rightCols(p.n - p.m);
  }
  if (basis.cols() == 0) return std::numeric_limits<double>::infinity();
  const Mat reduced = basis.transpose() * lag * basis;
  Eigen::SelfAdjointEigenSolver<Mat> solver(0.5 * (reduced + reduced.transpose()), Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

bool satisfies_sosc(const ProblemDef& p, const Vec& z, double t, double margin) {
  return tangent_hessian_min_eigenvalue(p, z, t) > margin;
}

std::vector<SpectrumSample> spectrum_along_trajectory(const ProblemDef& p, const Trajectory& ztraj,
                                                      double kkt_tol, double zero_tol) {
  std::vector<SpectrumSample> series;
  series.reserve(ztraj.size());
  for (std::size_t k = 0; k < ztraj.size(); ++k) {
    const double t = ztraj.times[k];
    const Vec& z = ztraj.states[k];
    const KktResidual kkt = kkt_residual(p, z, t);
    if (kkt.stationarity_norm > kkt_tol || kkt.feasibility_norm > kkt_tol) {
      std::ostringstream os;
      os << "spectrum_along_trajectory: state at t = " << t << " is not a KKT point (stationarity "
         << kkt.stationarity_norm << ", feasibility " << kkt.feasibility_norm << ")";
      throw InitializationError(os.str());
    }
    const SpectrumReport report = eigen_report(variant_jacobian(p, z, t).total(), zero_tol);
    SpectrumSample sample;
    sample.t = t;
    sample.max_real = report.max_real();
    sample.n_pos = report.n_pos;
    sample.n_zero = report.n_zero;
    sample.n_neg = report.n_neg;
    sample.flagged = report.n_pos > 0;
    series.push_back(sample);
  }
  return series;
}

Trajectory track_kkt_path(const ProblemDef& p, const Vec& z0, int samples) {
  check_problem(p);
  if (samples < 1) throw std::invalid_argument("track_kkt_path: need samples >= 1");
  FlowOptions flow;
  flow.include_data_rate = false;

  Trajectory path;
  Vec z = z0;
  for (int j = 0; j <= samples; ++j) {
    const double t = j == samples ? p.horizon : p.horizon * j / samples;
    const Vec start = restore_feasibility(p, z, t);
    const FlowResult res = frozen_time_flow(p, start, t, 100.0 * p.alpha, 1e-10, flow);
    Vec next = restore_feasibility(p, res.limit, t);
    const double step = path.empty() ? 0.0 : (next - path.states.back()).norm();
    path.diagnostics.push_back(diagnose(p, next, t, step));
    path.times.push_back(t);
    path.states.push_back(next);
    z = std::move(next);
  }
  return path;
}

}  // namespace tvl
