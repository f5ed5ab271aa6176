// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tvl/classify.hpp"
#include "tvl/conditions.hpp"
#include "tvl/discrete_engine.hpp"
#include "tvl/kkt_geometry.hpp"
#include "tvl/ode_engine.hpp"
#include "tvl/problem.hpp"
#include "tvl/spectrum.hpp"

namespace {

using tvl::Mat;
using tvl::Vec;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

Vec scalar(double v) { return Vec::Constant(1, v); }

Vec matrec_global(double t) {
  Vec z = Vec::Zero(6);
  z.head(2) = tvl::matrix_recovery_global(t);
  return z;
}

tvl::CatalogBuilder example1_catalog(const tvl::ProblemDef& p, double beta) {
  auto box = [beta](double t) {
    const double c = beta * std::sin(t);
    return tvl::SearchBox{scalar(c - 6.0), scalar(c + 6.0)};
  };
  return tvl::make_catalog_builder(p, box, 16, 1);
}

tvl::Verdict example1_verdict(double alpha, double beta, Vec* final_state = nullptr) {
  const tvl::ProblemDef p = tvl::make_example1(beta, alpha).problem;
  const tvl::Trajectory traj = tvl::backward_euler_trajectory(p, scalar(-2.0), 1e-3);
  if (final_state != nullptr) *final_state = traj.final_state();
  return tvl::classify_trajectory(p, traj, example1_catalog(p, beta), 0.75 * kTwoPi).verdict;
}

Outcome example1_case(double alpha, double beta, tvl::Verdict expected, double target) {
  Vec x_end;
  const tvl::Verdict verdict = example1_verdict(alpha, beta, &x_end);
  const tvl::ProblemDef p = tvl::make_example1(beta, alpha).problem;
  const tvl::FlowResult flow = tvl::frozen_time_flow(p, x_end, kTwoPi);
  const double miss = std::abs(flow.limit(0) - target);
  std::ostringstream os;
  os << "verdict=" << tvl::to_string(verdict) << " x(T)=" << x_end(0) << " flow limit=" << flow.limit(0);
  return {verdict == expected && flow.converged && miss < 1e-4, os.str()};
}

Outcome criterion1() { return example1_case(0.4, 10.0, tvl::Verdict::NonSpurious, 2.0); }

Outcome criterion2() { return example1_case(0.2, 5.0, tvl::Verdict::Spurious, -2.0); }

Outcome criterion3() {
  const tvl::Scalar1DFunction g = tvl::example1_quartic();
  const tvl::Prop1Report good = tvl::prop1_check(g, 0.4, 10.0);
  const tvl::Prop1Report bad = tvl::prop1_check(g, 0.2, 5.0);

  // C from a plain sampling oracle, independent of the checker's refinement
  double c_oracle = -1e300;
  for (int k = 0; k <= 100000; ++k) c_oracle = std::max(c_oracle, g.dg(g.y1 + (g.y3 - g.y1) * k / 100000.0));

  bool ok = good.satisfied && !bad.satisfied && !bad.cond1 && std::abs(bad.C - c_oracle) <= 1e-2 &&
            std::abs(2.137 - c_oracle) <= 1e-2 && 0.2 * 5.0 < bad.C;

  int satisfied_cells = 0, counterexamples = 0;
  for (double alpha : {0.1, 0.2, 0.3, 0.4, 0.5}) {
    for (double beta : {2.0, 5.0, 7.0, 10.0, 12.0}) {
      if (!tvl::prop1_check(g, alpha, beta).satisfied) continue;
      ++satisfied_cells;
      if (example1_verdict(alpha, beta) != tvl::Verdict::NonSpurious) ++counterexamples;
    }
  }
  ok = ok && counterexamples == 0;
  std::ostringstream os;
  os << "C=" << good.C << " (oracle " << c_oracle << ") satisfied cells=" << satisfied_cells
     << " counterexamples=" << counterexamples;
  return {ok, os.str()};
}

Outcome criterion4() {
  std::ostringstream os;
  bool any = false;
  for (double alpha : {0.05, 0.1, 0.2, 0.5, 1.0}) {
    const tvl::ProblemDef p = tvl::make_matrix_recovery(true, alpha);
    Vec x0 = Vec::Zero(6);
    x0(1) = 1.0 / std::sqrt(2.0);
    x0.tail(4) = p.constraints(x0) - p.data_path(0.0);
    const int steps = static_cast<int>(std::lround(kTwoPi / 1e-2));
    try {
      const tvl::Trajectory traj = tvl::discrete_trajectory(p, x0, steps);
      const Vec& x = traj.final_state();
      const Eigen::Vector2d z = tvl::matrix_recovery_global(kTwoPi);
      const double dist = std::min((x.head(2) - z).norm(), (x.head(2) + z).norm());
      const double obj = p.objective(x, kTwoPi);
      os << " a=" << alpha << ":dist=" << dist << ",f=" << obj;
      any = any || (dist < 0.1 && obj < 1e-2);
    } catch (const std::exception& e) {
      os << " a=" << alpha << ":error(" << e.what() << ")";
    }
  }
  return {any, os.str().substr(1)};
}

Outcome criterion5() {
  std::ostringstream os;
  bool ok = true;
  auto check = [&](const std::string& name, const tvl::ProblemDef& p, const Vec& x0, bool free_start) {
    tvl::ConvergenceOptions opts;
    opts.discrete.check_start = !free_start;
    opts.implicit.check_start = !free_start;
    opts.reference.check_start = !free_start;
    const auto rows = tvl::convergence_study(p, x0, {4e-3, 2e-3, 1e-3}, opts);
    os << name << ":";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      os << " " << rows[i].discrete_error;
      if (i > 0 && rows[i - 1].discrete_error / rows[i].discrete_error < 1.5) ok = false;
    }
    os << " ";
  };
  check("example1", tvl::make_example1(10.0, 0.4).problem, scalar(-2.0), false);

  tvl::ProblemDef quad;
  quad.name = "quadratic";
  quad.n = 1;
  quad.objective = [](const Vec& x, double) { return 0.5 * x.squaredNorm(); };
  quad.grad_objective = [](const Vec& x, double) { return x; };
  quad.horizon = kTwoPi;
  quad.alpha = 0.4;
  check("x^2/2", quad, scalar(1.0), true);
  return {ok, os.str()};
}

Outcome criterion6() {
  const tvl::ProblemDef p = tvl::make_example1(10.0, 0.4).problem;
  std::vector<double> rates;
  std::ostringstream os;
  for (double dt : {1e-2, 5e-3, 2.5e-3}) {
    const int steps = static_cast<int>(std::lround(kTwoPi / dt));
    rates.push_back(tvl::discrete_trajectory(p, scalar(-2.0), steps).max_step_rate());
    os << "dt=" << dt << ":" << rates.back() << " ";
  }
  const auto [lo, hi] = std::minmax_element(rates.begin(), rates.end());
  return {*hi <= 2.0 * *lo, os.str()};
}

Outcome criterion7() {
  const tvl::ProblemDef mr = tvl::make_matrix_recovery(true, 1.0);
  const tvl::SpectrumReport rep = tvl::eigen_report(tvl::invariant_jacobian(mr, matrec_global(0.0), 0.0), 1e-8);
  const Mat j1 = tvl::invariant_jacobian(tvl::make_example1(10.0, 0.4).problem, scalar(2.0), 0.0);
  std::ostringstream os;
  os << "matrec zero/neg/pos=" << rep.n_zero << "/" << rep.n_neg << "/" << rep.n_pos << " example1=" << j1(0, 0);
  const bool ok = rep.n_zero == 4 && rep.n_neg == 2 && rep.n_pos == 0 && j1.rows() == 1 &&
                  std::abs(j1(0, 0) + 23.75) <= 1e-9;
  return {ok, os.str()};
}

Mat fd_jacobian(const tvl::ProblemDef& p, const Vec& z, double t) {
  const double h = 1e-6;
  Mat out(p.n, p.n);
  for (int j = 0; j < p.n; ++j) {
    Vec up = z, down = z;
    up(j) += h;
    down(j) -= h;
    out.col(j) = (tvl::ode_rhs(p, up, t) - tvl::ode_rhs(p, down, t)) / (2.0 * h);
  }
  return out;
}

Outcome criterion8() {
  const tvl::ProblemDef p = tvl::make_matrix_recovery(true, 0.5);
  double worst = 0.0;
  for (int j = 0; j < 10; ++j) {
    const double t = kTwoPi * j / 10.0;
    const Vec z = matrec_global(t);
    const Mat fd = fd_jacobian(p, z, t);
    const Mat exact = tvl::variant_jacobian(p, z, t).total();
    worst = std::max(worst, (exact - fd).norm() / std::max(1.0, fd.norm()));
  }
  tvl::ProblemDef frozen = p;
  frozen.data_rate = [](double) { return Vec::Zero(4); };
  double k2_norm = 0.0;
  for (int j = 0; j < 10; ++j) {
    const double t = kTwoPi * j / 10.0;
    k2_norm = std::max(k2_norm, tvl::variant_jacobian(frozen, matrec_global(t), t).k2.norm());
  }
  std::ostringstream os;
  os << "max relative error=" << worst << " frozen |K2|=" << k2_norm;
  return {worst <= 1e-5 && k2_norm == 0.0, os.str()};
}

Outcome criterion9() {
  const tvl::ProblemDef p = tvl::make_matrix_recovery(true, 0.5);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> coord(-2.0, 2.0), time(0.0, kTwoPi);
  double proj = 0.0, tangency = 0.0;
  for (int k = 0; k < 100; ++k) {
    Vec x = Vec::Zero(6);
    x(0) = coord(rng);
    x(1) = coord(rng);
    const double t = time(rng);
    x.tail(4) = p.constraints(x) - p.data_path(t);
    const tvl::GeometryResult g = tvl::geometry(p, x);
    const Mat& P = g.projector;
    proj = std::max({proj, (P * P - P).norm(), (P - P.transpose()).norm(), (g.jacobian * P).norm()});
    tangency = std::max(tangency, (g.jacobian * tvl::ode_rhs(p, x, t) - p.data_rate(t)).norm());
  }
  std::ostringstream os;
  os << "projector defect=" << proj << " |J rhs - d_dot|=" << tangency;
  return {proj <= 1e-10 && tangency <= 1e-8, os.str()};
}

Outcome criterion10() {
  const tvl::Thm3Report r = tvl::thm3_check(tvl::quartic_field(1), {scalar(-2.0)}, 0.5, 0.4, 10.0, 1.0, 0.0);
  bool ordered = r.C1 >= r.C2;
  for (int n : {1, 2, 3}) {
    for (double R : {0.1, 0.5, 1.0}) {
      Vec y = Vec::Zero(n);
      y(0) = -2.0;
      const tvl::Thm3Report inst = tvl::thm3_check(tvl::quartic_field(n), {y}, R, 0.4, 10.0, 1.0, 0.1);
      ordered = ordered && inst.C1 >= inst.C2;
    }
  }
  std::ostringstream os;
  os << "C1=" << r.C1 << " C2=" << r.C2 << " satisfied=" << (r.satisfied ? "true" : "false");
  const bool ok = std::abs(r.C1 - 4.78125) <= 1e-3 && std::abs(r.C2 + 4.78125) <= 1e-3 && !r.satisfied && ordered;
  return {ok, os.str()};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
    double time_limit;  // seconds, <= 0 for none
  };
  const std::vector<Criterion> criteria = {
      {"1 example1 alpha=0.4 beta=10 non-spurious", criterion1, 5.0},
      {"2 example1 alpha=0.2 beta=5 spurious", criterion2, 0.0},
      {"3 escape conditions and grid cross-check", criterion3, 0.0},
      {"4 matrix recovery reaches global path", criterion4, 30.0},
      {"5 first-order convergence", criterion5, 0.0},
      {"6 step bound uniform in dt", criterion6, 0.0},
      {"7 invariant Jacobian spectrum", criterion7, 0.0},
      {"8 K1+K2 against finite differences", criterion8, 0.0},
      {"9 geometry invariants", criterion9, 0.0},
      {"10 damped-sinusoid constants", criterion10, 0.0},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit > 0.0 && secs >= c.time_limit) {
      out.pass = false;
      out.detail += " (time limit exceeded)";
    }
    if (!out.pass) ++failures;
    std::printf("%s criterion %s [%.2fs] %s\n", out.pass ? "PASS" : "FAIL", c.name, secs, out.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
