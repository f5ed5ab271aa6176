#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tvl/ode_engine.hpp"
#include "tvl/problem.hpp"
#include "tvl/trajectory.hpp"

namespace tvl {

// Involution identifying symmetric minimizers (e.g. X <-> -X).
using Equivalence = std::function<Vec(const Vec&)>;

struct SearchBox {
  Vec lower;
  Vec upper;
};

// Local minimizers of f(., t) on F(t) found by multistart.
struct MinimizerCatalog {
  double anchor_time = 0.0;
  std::vector<Vec> minimizers;
  std::vector<double> objective_values;
  std::vector<int> global_ids;
  Equivalence equivalence;
  int dropped_unconverged = 0;  // flows that did not settle
  int dropped_non_minima = 0;   // limits failing the second-order test

  bool is_global(int id) const;
};

struct CatalogOptions {
  double cluster_radius = 1e-4;
  Equivalence equivalence;
  double sosc_margin = 1e-8;
};

// Multistart frozen-time flows (without the data drift term, which has no
// equilibria when m >= 1 and d_dot != 0) from uniform points in `box`,
// clustered within cluster_radius, kept when the tangent Hessian is positive
// definite, sorted lexicographically.
MinimizerCatalog build_catalog(const ProblemDef& p, double t, int starts, std::uint64_t seed,
                               const SearchBox& box, const CatalogOptions& options = {});

using CatalogBuilder = std::function<MinimizerCatalog(double t)>;

CatalogBuilder make_catalog_builder(const ProblemDef& p, std::function<SearchBox(double)> box,
                                    int starts, std::uint64_t seed, CatalogOptions options = {});

struct Membership {
  std::optional<int> id;  // empty: Unresolved
  bool converged = false;
  bool global = false;
  Vec limit;
};

struct MembershipOptions {
  double tol = 1e-4;
  FlowOptions flow;  // includes theta d_dot by default
};

// Region-of-attraction membership of x at time t.
Membership attraction_membership(const ProblemDef& p, const Vec& x, double t,
                                 const MinimizerCatalog& catalog, const MembershipOptions& options = {});

enum class Verdict { NonSpurious, Spurious, Unresolved };

std::string to_string(Verdict v);

struct MembershipRecord {
  double t = 0.0;
  std::optional<int> id;
  bool global = false;
};

struct Classification {
  Verdict verdict = Verdict::Unresolved;
  std::vector<MembershipRecord> records;
};

struct ClassifyOptions {
  int max_checks = 200;
  MembershipOptions membership;
};

// NonSpurious iff every checked time t >= t_bar maps to a global minimizer;
// Spurious iff some checked time maps to a non-global one.
Classification classify_trajectory(const ProblemDef& p, const Trajectory& traj,
                                   const CatalogBuilder& catalog_builder, double t_bar,
                                   const ClassifyOptions& options = {});

}  // namespace tvl
