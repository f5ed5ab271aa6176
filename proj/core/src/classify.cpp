#include "tvl/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "tvl/errors.hpp"
#include "tvl/kkt_geometry.hpp"
#include "tvl/parallel.hpp"
#include "tvl/spectrum.hpp"

namespace tvl {

bool MinimizerCatalog::is_global(int id) const {
  return std::find(global_ids.begin(), global_ids.end(), id) != global_ids.end();
}

MinimizerCatalog build_catalog(const ProblemDef& p, double t, int starts, std::uint64_t seed,
                               const SearchBox& box, const CatalogOptions& options) {
  if (starts < 1) throw std::invalid_argument("build_catalog: need starts >= 1");
  if (box.lower.size() != p.n || box.upper.size() != p.n || !box.lower.allFinite() ||
      !box.upper.allFinite()) {
    throw std::invalid_argument("build_catalog: box must be finite with dimension n");
  }

  std::mt19937_64 rng(seed);
  std::vector<Vec> points(starts, Vec(p.n));
  for (auto& x : points) {
    for (int i = 0; i < p.n; ++i) {
      std::uniform_real_distribution<double> coord(box.lower(i), box.upper(i));
      x(i) = coord(rng);
    }
  }

  FlowOptions flow;
  flow.include_data_rate = false;
  std::vector<std::optional<Vec>> limits(starts);
  parallel_for(points.size(), [&](std::size_t k) {
    try {
      const Vec start = restore_feasibility(p, points[k], t);
      const FlowResult res = frozen_time_flow(p, start, t, flow);
      if (res.converged) limits[k] = restore_feasibility(p, res.limit, t);
    } catch (const NumericalError&) {
      // left unconverged
    }
  });

  MinimizerCatalog catalog;
  catalog.anchor_time = t;
  catalog.equivalence = options.equivalence;

  std::vector<Vec> centers;
  for (const auto& limit : limits) {
    if (!limit) {
      ++catalog.dropped_unconverged;
      continue;
    }
    const bool known = std::any_of(centers.begin(), centers.end(), [&](const Vec& c) {
      return (c - *limit).norm() <= options.cluster_radius;
    });
    if (!known) centers.push_back(*limit);
  }
  std::sort(centers.begin(), centers.end(), [](const Vec& a, const Vec& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
  });

  for (const Vec& c : centers) {
    if (p.has_hessians() && !satisfies_sosc(p, c, t, options.sosc_margin)) {
      ++catalog.dropped_non_minima;
      continue;
    }
    catalog.minimizers.push_back(c);
    catalog.objective_values.push_back(p.objective(c, t));
  }

  if (!catalog.minimizers.empty()) {
    const double best = *std::min_element(catalog.objective_values.begin(), catalog.objective_values.end());
    const double slack = 1e-8 * (1.0 + std::abs(best));
    for (std::size_t i = 0; i < catalog.minimizers.size(); ++i) {
      if (catalog.objective_values[i] <= best + slack) catalog.global_ids.push_back(static_cast<int>(i));
    }
  }
  return catalog;
}

CatalogBuilder make_catalog_builder(const ProblemDef& p, std::function<SearchBox(double)> box,
                                    int starts, std::uint64_t seed, CatalogOptions options) {
  return [p, box = std::move(box), starts, seed, options = std::move(options)](double t) {
    return build_catalog(p, t, starts, seed, box(t), options);
  };
}

Membership attraction_membership(const ProblemDef& p, const Vec& x, double t,
                                 const MinimizerCatalog& catalog, const MembershipOptions& options) {
  Membership out;
  const FlowResult res = frozen_time_flow(p, x, t, options.flow);
  out.converged = res.converged;
  out.limit = res.limit;
  if (!res.converged) return out;

  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < catalog.minimizers.size(); ++i) {
    const Vec& entry = catalog.minimizers[i];
    double dist = (res.limit - entry).norm();
    if (catalog.equivalence) dist = std::min(dist, (res.limit - catalog.equivalence(entry)).norm());
    if (dist <= options.tol && dist < best) {
      best = dist;
      out.id = static_cast<int>(i);
    }
  }
  out.global = out.id && catalog.is_global(*out.id);
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::NonSpurious:
      return "non-spurious";
    case Verdict::Spurious:
      return "spurious";
    case Verdict::Unresolved:
      break;
  }
  return "unresolved";
}

Classification classify_trajectory(const ProblemDef& p, const Trajectory& traj,
                                   const CatalogBuilder& catalog_builder, double t_bar,
                                   const ClassifyOptions& options) {
  if (traj.empty()) throw std::invalid_argument("classify_trajectory: empty trajectory");
  if (!(t_bar >= 0.0) || !(t_bar < p.horizon)) {
    throw std::invalid_argument("classify_trajectory: need 0 <= t_bar < T");
  }
  if (options.max_checks < 1) throw std::invalid_argument("classify_trajectory: need max_checks >= 1");

  std::vector<std::size_t> eligible;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    if (traj.times[k] >= t_bar) eligible.push_back(k);
  }
  std::vector<std::size_t> checks;
  const std::size_t limit = static_cast<std::size_t>(options.max_checks);
  if (eligible.size() <= limit) {
    checks = eligible;
  } else if (limit == 1) {
    checks.push_back(eligible.back());
  } else {
    for (std::size_t j = 0; j < limit; ++j) {
      const double pos = static_cast<double>(j) * (eligible.size() - 1) / (limit - 1);
      checks.push_back(eligible[static_cast<std::size_t>(std::llround(pos))]);
    }
  }

  Classification out;
  out.records.resize(checks.size());
  parallel_for(checks.size(), [&](std::size_t j) {
    const std::size_t k = checks[j];
    const double t = traj.times[k];
    MembershipRecord& rec = out.records[j];
    rec.t = t;
    try {
      const MinimizerCatalog catalog = catalog_builder(t);
      const Membership m = attraction_membership(p, traj.states[k], t, catalog, options.membership);
      rec.id = m.id;
      rec.global = m.global;
    } catch (const NumericalError&) {
      rec.id.reset();
    }
  });

  bool any_non_global = false;
  bool all_global = true;
  for (const auto& rec : out.records) {
    if (rec.id && !rec.global) any_non_global = true;
    if (!rec.id || !rec.global) all_global = false;
  }
  if (any_non_global) {
    out.verdict = Verdict::Spurious;
  } else if (all_global && !out.records.empty()) {
    out.verdict = Verdict::NonSpurious;
  } else {
    out.verdict = Verdict::Unresolved;
  }
  return out;
}

}  // namespace tvl
