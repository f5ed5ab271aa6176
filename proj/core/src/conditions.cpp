#include "tvl/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "tvl/errors.hpp"

namespace tvl {

namespace {

constexpr double kPi = std::numbers::pi;

double bisect_root(const std::function<double(double)>& f, double a, double b) {
  boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 3);
  const auto [lo, hi] = boost::math::tools::bisect(f, a, b, tol);
  return 0.5 * (lo + hi);
}

// Largest root of g' + alpha beta below y1 (first crossing moving left).
double left_crossing(const Scalar1DFunction& g, double level) {
  auto f = [&](double y) { return g.dg(y) + level; };
  const double h0 = (g.y3 - g.y1) / 1000.0;
  double prev = g.y1;
  double step = h0;
  for (int k = 0; k < 2000; ++k) {
    const double next = prev - step;
    if (f(next) < 0.0) return bisect_root(f, next, prev);
    prev = next;
    // fine steps across one well width, geometric growth afterwards
    if (g.y1 - prev > g.y3 - g.y1) step *= 2.0;
    if (!std::isfinite(prev)) break;
  }
  throw RootBracketError("prop1: g' never reaches -alpha beta below y1");
}

// Smallest root of g' + alpha beta above y1; it lies in (y1, y3) because
// g' >= 0 on [y3, inf).
double right_crossing(const Scalar1DFunction& g, double level) {
  auto f = [&](double y) { return g.dg(y) + level; };
  constexpr int kScan = 10000;
  const double h = (g.y3 - g.y1) / kScan;
  double prev = g.y1;
  for (int k = 1; k <= kScan; ++k) {
    const double next = g.y1 + k * h;
    if (f(next) < 0.0) return bisect_root(f, prev, next);
    prev = next;
  }
  throw RootBracketError("prop1: g' never reaches -alpha beta between y1 and y3");
}

double radical_inverse(unsigned long index, unsigned base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= base;
  }
  return result;
}

constexpr unsigned kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
                                43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};
constexpr int kMaxHaltonDims = static_cast<int>(std::size(kPrimes));

// Unit vector from a Halton point via the normal quantile map.
Vec halton_direction(unsigned long index, int n) {
  Vec d(n);
  for (int k = 0; k < n; ++k) {
    const double u = radical_inverse(index, kPrimes[k]);
    d(k) = std::sqrt(2.0) * boost::math::erf_inv(2.0 * u - 1.0);
  }
  const double norm = d.norm();
  if (norm == 0.0) {
    d.setZero();
    d(0) = 1.0;
    return d;
  }
  return d / norm;
}

// Compass search; `project` maps trial points back to the feasible set.
Vec pattern_search(const std::function<double(const Vec&)>& objective, Vec x,
                   const std::function<Vec(const Vec&)>& project, double step, double min_step) {
  double best = objective(x);
  int evaluations = 0;
  while (step > min_step && evaluations < 200000) {
    bool improved = false;
    for (Eigen::Index i = 0; i < x.size() && !improved; ++i) {
      for (double sign : {1.0, -1.0}) {
        Vec trial = x;
        trial(i) += sign * step;
        trial = project(trial);
        const double value = objective(trial);
        ++evaluations;
        if (value < best) {
          best = value;
          x = trial;
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return x;
}

}  // namespace

double prop1_max_slope(const Scalar1DFunction& g, int samples) {
  if (samples < 2) throw std::invalid_argument("prop1_max_slope: need at least 2 samples");
  const double h = (g.y3 - g.y1) / (samples - 1);
  int best_k = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < samples; ++k) {
    const double v = g.dg(g.y1 + k * h);
    if (v > best) {
      best = v;
      best_k = k;
    }
  }
  const double lo = g.y1 + std::max(0, best_k - 1) * h;
  const double hi = g.y1 + std::min(samples - 1, best_k + 1) * h;
  const auto [arg, neg] = boost::math::tools::brent_find_minima(
      [&](double y) { return -g.dg(y); }, lo, hi, std::numeric_limits<double>::digits / 2);
  (void)arg;
  return std::max(best, -neg);
}

Prop1Report prop1_constants(const Scalar1DFunction& g, double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw std::invalid_argument("prop1: need alpha, beta > 0");
  Prop1Report r;
  r.alpha = alpha;
  r.beta = beta;
  r.C = prop1_max_slope(g);
  const double level = alpha * beta;
  const double ratio = r.C / level;
  if (std::abs(ratio) <= 1.0) {
    r.t1 = std::acos(-ratio);
    r.t2 = 2.0 * kPi - *r.t1;
  }
  r.m1 = left_crossing(g, level);
  r.m2 = right_crossing(g, level);
  return r;
}

Prop1Report prop1_check(const Scalar1DFunction& g, double alpha, double beta) {
  Prop1Report r;
  try {
    r = prop1_constants(g, alpha, beta);
  } catch (const RootBracketError&) {
    r.alpha = alpha;
    r.beta = beta;
    r.C = prop1_max_slope(g);
    const double ratio = r.C / (alpha * beta);
    if (std::abs(ratio) <= 1.0) {
      r.t1 = std::acos(-ratio);
      r.t2 = 2.0 * kPi - *r.t1;
    }
    r.m1.reset();
    r.m2.reset();
  }
  r.cond1 = alpha * beta >= r.C;
  r.cond2 = r.m1 && r.m2 && *r.m1 < g.y1 && g.y1 < *r.m2;
  if (r.cond2 && r.t1 && r.t2) {
    r.cond3_lhs = -r.C / alpha * (*r.t2 - *r.t1) - beta * (std::sin(*r.t2) - std::sin(*r.t1)) + *r.m1;
    r.cond3 = *r.cond3_lhs >= *r.m2;
  }
  r.satisfied = r.cond1 && r.cond2 && r.cond3;
  return r;
}

std::vector<RegionCell> prop1_region(const Scalar1DFunction& g, const std::vector<double>& alpha_grid,
                                     const std::vector<double>& beta_grid) {
  std::vector<RegionCell> cells;
  cells.reserve(alpha_grid.size() * beta_grid.size());
  for (double a : alpha_grid) {
    for (double b : beta_grid) {
      RegionCell cell{a, b, false, false};
      try {
        cell.satisfied = prop1_check(g, a, b).satisfied;
      } catch (const std::exception&) {
        cell.failed = true;
      }
      cells.push_back(cell);
    }
  }
  return cells;
}

Thm3Report thm3_check(const ScalarField& g, const std::vector<Vec>& minima, double R, double alpha,
                      double beta, double omega, double lambda, const Thm3Options& options) {
  if (minima.empty()) throw std::invalid_argument("thm3: need at least one minimum");
  if (!(R > 0.0) || !(alpha > 0.0) || !(beta > 0.0) || !(omega > 0.0) || lambda < 0.0) {
    throw std::invalid_argument("thm3: need R, alpha, beta, omega > 0 and lambda >= 0");
  }
  const int n = g.n;
  if (n + 1 > kMaxHaltonDims) throw std::invalid_argument("thm3: dimension too large for sampling");

  Thm3Report r;
  r.R = R;
  r.C1 = -std::numeric_limits<double>::infinity();
  r.C2 = std::numeric_limits<double>::infinity();

  auto grad_norm = [&](const Vec& y) { return g.gradient(y).norm(); };

  for (const Vec& center : minima) {
    if (center.size() != n) throw std::invalid_argument("thm3: minimum has wrong dimension");

    // C1 over the ball.
    auto into_ball = [&](const Vec& y) -> Vec {
      const Vec off = y - center;
      const double dist = off.norm();
      return dist <= R ? y : Vec(center + off * (R / dist));
    };
    Vec best_point = center;
    double best = grad_norm(center);
    if (n == 1) {
      const int samples = std::max(2, options.ball_samples);
      for (int k = 0; k < samples; ++k) {
        Vec y(1);
        y(0) = center(0) - R + 2.0 * R * k / (samples - 1);
        const double v = grad_norm(y);
        if (v > best) {
          best = v;
          best_point = y;
        }
      }
    } else {
      for (int k = 1; k <= options.ball_samples; ++k) {
        const Vec dir = halton_direction(static_cast<unsigned long>(k), n);
        const double radius = R * std::pow(radical_inverse(static_cast<unsigned long>(k), kPrimes[n]), 1.0 / n);
        const Vec y = center + radius * dir;
        const double v = grad_norm(y);
        if (v > best) {
          best = v;
          best_point = y;
        }
      }
    }
    const Vec refined = pattern_search([&](const Vec& y) { return -grad_norm(y); }, best_point, into_ball,
                                       R / 100.0, 1e-12 * (1.0 + R));
    r.C1 = std::max({r.C1, best, grad_norm(refined)});

    // C2 over unit directions.
    auto directional = [&](const Vec& d) { return g.gradient(center - R * d).dot(d); };
    if (n == 1) {
      for (double s : {-1.0, 1.0}) {
        Vec d(1);
        d(0) = s;
        r.C2 = std::min(r.C2, directional(d));
      }
    } else {
      Vec best_dir = halton_direction(1, n);
      double lowest = directional(best_dir);
      for (int k = 2; k <= options.sphere_samples; ++k) {
        const Vec d = halton_direction(static_cast<unsigned long>(k), n);
        const double v = directional(d);
        if (v < lowest) {
          lowest = v;
          best_dir = d;
        }
      }
      const Vec refined_dir = pattern_search(directional, best_dir,
                                             [](const Vec& d) -> Vec { return d.normalized(); }, 1e-2, 1e-12);
      r.C2 = std::min({r.C2, lowest, directional(refined_dir)});
    }
  }

  const double w = std::sqrt(lambda * lambda + omega * omega);
  r.cond1_lhs = 2.0 * alpha * omega * (beta * std::exp(-lambda * kPi / (2.0 * omega)) - R) / kPi;
  r.cond2_lhs = alpha * beta * std::exp(-lambda * R * alpha / (r.C1 + alpha * beta * omega)) * w;
  r.cond1 = r.cond1_lhs > r.C1;
  r.cond2 = r.cond2_lhs < r.C2;
  r.necessary_ok = alpha * beta * w >= -r.C2;
  r.satisfied = r.cond1 && r.cond2;
  return r;
}

}  // namespace tvl
