#include "tvl/problem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace tvl {

Vec ProblemDef::h(const Vec& x) const {
  if (m == 0) return Vec(0);
  return constraints(x);
}

Mat ProblemDef::J(const Vec& x) const {
  if (m == 0) return Mat(0, n);
  return jacobian(x);
}

Vec ProblemDef::d(double t) const {
  if (m == 0) return Vec(0);
  return data_path(t);
}

Vec ProblemDef::d_dot(double t) const {
  if (m == 0) return Vec(0);
  return data_rate(t);
}

void check_problem(const ProblemDef& p) {
  if (p.n < 1) throw std::invalid_argument("problem: n must be >= 1");
  if (p.m < 0 || p.m > p.n) throw std::invalid_argument("problem: need 0 <= m <= n");
  if (!(p.alpha > 0.0)) throw std::invalid_argument("problem: alpha must be > 0");
  if (!(p.horizon > 0.0)) throw std::invalid_argument("problem: horizon must be > 0");
  if (!p.objective || !p.grad_objective) {
    throw std::invalid_argument("problem: objective and gradient are required");
  }
  if (p.m > 0 && (!p.constraints || !p.jacobian || !p.data_path || !p.data_rate)) {
    throw std::invalid_argument("problem: constrained problems need h, J, d and d_dot");
  }
}

Scalar1DFunction example1_quartic() {
  Scalar1DFunction q;
  q.g = [](double y) { return 0.25 * y * y * y * y + 0.125 * y * y * y - 2.0 * y * y - 1.5 * y + 8.0; };
  q.dg = [](double y) { return y * y * y + 0.375 * y * y - 4.0 * y - 1.5; };
  q.d2g = [](double y) { return 3.0 * y * y + 0.75 * y - 4.0; };
  q.y1 = -2.0;
  q.y2 = -0.375;
  q.y3 = 2.0;
  return q;
}

Example1 make_example1(double beta, double alpha) {
  if (!(beta > 0.0)) throw std::invalid_argument("make_example1: beta must be > 0");
  Example1 out;
  out.g = example1_quartic();
  auto q = out.g;

  ProblemDef& p = out.problem;
  p.name = "example1";
  p.n = 1;
  p.m = 0;
  p.horizon = 2.0 * std::numbers::pi;
  p.alpha = alpha;
  p.objective = [q, beta](const Vec& x, double t) { return q.g(x(0) - beta * std::sin(t)); };
  p.grad_objective = [q, beta](const Vec& x, double t) {
    Vec grad(1);
    grad(0) = q.dg(x(0) - beta * std::sin(t));
    return grad;
  };
  p.hess_objective = [q, beta](const Vec& x, double t) {
    Mat hess(1, 1);
    hess(0, 0) = q.d2g(x(0) - beta * std::sin(t));
    return hess;
  };
  return out;
}

const std::vector<Eigen::Matrix2d>& matrix_recovery_sensing() {
  static const std::vector<Eigen::Matrix2d> sensing = [] {
    const double s3 = std::sqrt(3.0);
    const double r2 = 1.0 / std::sqrt(2.0);
    std::vector<Eigen::Matrix2d> a(4);
    a[0] << 1.0, 0.0, 0.0, 0.5;
    a[1] << 0.0, s3 / 2.0, s3 / 2.0, 0.0;
    a[2] << 1.0, -r2, r2, 0.0;
    a[3] << 0.0, 0.0, 0.0, s3 / 2.0;
    return a;
  }();
  return sensing;
}

Eigen::Vector2d matrix_recovery_global(double t) {
  return {0.8 + 0.2 * std::cos(t), 0.2 * std::sin(t)};
}

Eigen::Vector2d matrix_recovery_global_rate(double t) {
  return {-0.2 * std::sin(t), 0.2 * std::cos(t)};
}

ProblemDef make_matrix_recovery(bool consistent_data, double alpha) {
  const auto& a = matrix_recovery_sensing();
  std::vector<Eigen::Matrix2d> sym(4);
  for (int i = 0; i < 4; ++i) sym[i] = a[i] + a[i].transpose();

  ProblemDef p;
  p.name = consistent_data ? "matrec" : "matrec-printed";
  p.n = 6;
  p.m = 4;
  p.horizon = 2.0 * std::numbers::pi;
  p.alpha = alpha;

  p.objective = [](const Vec& x, double) { return x.tail(4).squaredNorm(); };
  p.grad_objective = [](const Vec& x, double) {
    Vec grad = Vec::Zero(6);
    grad.tail(4) = 2.0 * x.tail(4);
    return grad;
  };
  p.hess_objective = [](const Vec&, double) {
    Mat hess = Mat::Zero(6, 6);
    hess.bottomRightCorner(4, 4).diagonal().setConstant(2.0);
    return hess;
  };
  p.constraints = [a](const Vec& x) {
    const Eigen::Vector2d X = x.head(2);
    Vec h(4);
    for (int i = 0; i < 4; ++i) h(i) = X.dot(a[i] * X) - x(2 + i);
    return h;
  };
  p.jacobian = [sym](const Vec& x) {
    const Eigen::Vector2d X = x.head(2);
    Mat jac = Mat::Zero(4, 6);
    for (int i = 0; i < 4; ++i) {
      jac.block<1, 2>(i, 0) = (sym[i] * X).transpose();
      jac(i, 2 + i) = -1.0;
    }
    return jac;
  };
  p.constraint_hessians = [sym](const Vec&) {
    std::vector<Mat> hs(4, Mat::Zero(6, 6));
    for (int i = 0; i < 4; ++i) hs[i].topLeftCorner(2, 2) = sym[i];
    return hs;
  };

  if (consistent_data) {
    p.data_path = [a](double t) {
      const Eigen::Vector2d z = matrix_recovery_global(t);
      Vec d(4);
      for (int i = 0; i < 4; ++i) d(i) = z.dot(a[i] * z);
      return d;
    };
    p.data_rate = [sym](double t) {
      const Eigen::Vector2d z = matrix_recovery_global(t);
      const Eigen::Vector2d zd = matrix_recovery_global_rate(t);
      Vec dd(4);
      for (int i = 0; i < 4; ++i) dd(i) = zd.dot(sym[i] * z);
      return dd;
    };
  } else {
    p.data_path = [](double t) {
      const double c = 0.8 + 0.2 * std::cos(t);
      const double s = 0.2 * std::sin(t);
      Vec d(4);
      d << c * c + 0.5 * s * s, std::sqrt(3.0) * s * c, 0.0, std::sqrt(3.0) / 2.0 * s * s;
      return d;
    };
    p.data_rate = [](double t) {
      const double c = 0.8 + 0.2 * std::cos(t);
      const double s = 0.2 * std::sin(t);
      const double dc = -0.2 * std::sin(t);
      const double ds = 0.2 * std::cos(t);
      Vec dd(4);
      dd << 2.0 * c * dc + s * ds, std::sqrt(3.0) * (ds * c + s * dc), 0.0, std::sqrt(3.0) * s * ds;
      return dd;
    };
  }
  return p;
}

ProblemDef make_damped_sinusoid(const ScalarField& g, double beta, double omega, double lambda,
                                const Vec& u, double horizon, double alpha) {
  if (u.size() != g.n) throw std::invalid_argument("make_damped_sinusoid: u has wrong dimension");
  if (std::abs(u.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("make_damped_sinusoid: direction u must have unit norm");
  }
  if (!(beta > 0.0) || !(omega > 0.0) || lambda < 0.0) {
    throw std::invalid_argument("make_damped_sinusoid: need beta, omega > 0 and lambda >= 0");
  }
  auto shift = [beta, omega, lambda, u](double t) -> Vec {
    return beta * std::exp(-lambda * t) * std::sin(omega * t) * u;
  };

  ProblemDef p;
  p.name = "damped";
  p.n = g.n;
  p.m = 0;
  p.horizon = horizon;
  p.alpha = alpha;
  p.objective = [g, shift](const Vec& x, double t) { return g.value(x - shift(t)); };
  p.grad_objective = [g, shift](const Vec& x, double t) { return g.gradient(x - shift(t)); };
  if (g.hessian) {
    p.hess_objective = [g, shift](const Vec& x, double t) { return g.hessian(x - shift(t)); };
  }
  return p;
}

ScalarField quartic_field(int n) {
  if (n < 1) throw std::invalid_argument("quartic_field: n must be >= 1");
  const Scalar1DFunction q = example1_quartic();
  ScalarField f;
  f.n = n;
  f.value = [q](const Vec& y) { return q.g(y(0)) + 0.5 * y.tail(y.size() - 1).squaredNorm(); };
  f.gradient = [q](const Vec& y) {
    Vec grad = y;
    grad(0) = q.dg(y(0));
    return grad;
  };
  f.hessian = [q, n](const Vec& y) {
    Mat hess = Mat::Identity(n, n);
    hess(0, 0) = q.d2g(y(0));
    return hess;
  };
  return f;
}

namespace {

constexpr double kDerivativeTolerance = 1e-5;

double relative_deviation(const Mat& analytic, const Mat& numeric) {
  return (analytic - numeric).norm() / std::max(1.0, numeric.norm());
}

void record(ValidationReport& report, const std::string& name, double deviation) {
  auto it = std::find_if(report.checks.begin(), report.checks.end(),
                         [&](const DerivativeCheck& c) { return c.name == name; });
  if (it == report.checks.end()) {
    report.checks.push_back({name, 0.0, true});
    it = report.checks.end() - 1;
  }
  it->max_rel_deviation = std::max(it->max_rel_deviation, deviation);
  it->passed = it->max_rel_deviation <= kDerivativeTolerance;
}

}  // namespace

bool ValidationReport::passed() const {
  return invariant_failures.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const DerivativeCheck& c) { return c.passed; });
}

ValidationReport validate_problem(const ProblemDef& p, int samples, std::uint64_t seed,
                                  double box_half_width) {
  if (samples < 1) throw std::invalid_argument("validate_problem: samples must be >= 1");
  ValidationReport report;
  report.samples = samples;
  report.seed = seed;
  try {
    check_problem(p);
  } catch (const std::invalid_argument& e) {
    report.invariant_failures.emplace_back(e.what());
    return report;
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-box_half_width, box_half_width);
  std::uniform_real_distribution<double> time(0.0, p.horizon);

  for (int s = 0; s < samples; ++s) {
    Vec x(p.n);
    for (int i = 0; i < p.n; ++i) x(i) = coord(rng);
    const double t = time(rng);
    const double hx = 1e-6 * (1.0 + x.norm());

    Vec fd_grad(p.n);
    for (int i = 0; i < p.n; ++i) {
      Vec xp = x, xm = x;
      xp(i) += hx;
      xm(i) -= hx;
      fd_grad(i) = (p.objective(xp, t) - p.objective(xm, t)) / (2.0 * hx);
    }
    record(report, "grad_objective", relative_deviation(p.grad_objective(x, t), fd_grad));

    if (p.hess_objective) {
      Mat fd_hess(p.n, p.n);
      for (int i = 0; i < p.n; ++i) {
        Vec xp = x, xm = x;
        xp(i) += hx;
        xm(i) -= hx;
        fd_hess.col(i) = (p.grad_objective(xp, t) - p.grad_objective(xm, t)) / (2.0 * hx);
      }
      record(report, "hess_objective", relative_deviation(p.hess_objective(x, t), fd_hess));
    }

    if (p.m > 0) {
      Mat fd_jac(p.m, p.n);
      for (int i = 0; i < p.n; ++i) {
        Vec xp = x, xm = x;
        xp(i) += hx;
        xm(i) -= hx;
        fd_jac.col(i) = (p.constraints(xp) - p.constraints(xm)) / (2.0 * hx);
      }
      record(report, "jacobian", relative_deviation(p.jacobian(x), fd_jac));

      if (p.constraint_hessians) {
        const std::vector<Mat> hs = p.constraint_hessians(x);
        double worst = 0.0;
        for (int k = 0; k < p.m; ++k) {
          Mat fd_h(p.n, p.n);
          for (int i = 0; i < p.n; ++i) {
            Vec xp = x, xm = x;
            xp(i) += hx;
            xm(i) -= hx;
            fd_h.col(i) = (p.jacobian(xp).row(k) - p.jacobian(xm).row(k)).transpose() / (2.0 * hx);
          }
          worst = std::max(worst, relative_deviation(hs[k], fd_h));
        }
        record(report, "constraint_hessians", worst);
      }

      const double ht = 1e-6 * (1.0 + std::abs(t));
      const Vec fd_rate = (p.data_path(t + ht) - p.data_path(t - ht)) / (2.0 * ht);
      record(report, "data_rate", relative_deviation(p.data_rate(t), fd_rate));
    }
  }
  return report;
}

}  // namespace tvl
