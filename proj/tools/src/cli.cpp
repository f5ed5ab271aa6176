#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tvl/classify.hpp"
#include "tvl/conditions.hpp"
#include "tvl/discrete_engine.hpp"
#include "tvl/errors.hpp"
#include "tvl/kkt_geometry.hpp"
#include "tvl/ode_engine.hpp"
#include "tvl/parallel.hpp"
#include "tvl/spectrum.hpp"

namespace tvl::cli {

using nlohmann::json;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string normalize_key(std::string key) {
  std::replace(key.begin(), key.end(), '-', '_');
  return key;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || trim(text.substr(used)) != "") {
    throw UsageError("invalid number for '" + key + "': '" + text + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) parts.push_back(trim(item));
  return parts;
}

// Shortest text that parses back to the same double.
std::string fmt(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "scenario", "alpha",   "beta",  "omega",           "lambda",      "R",      "x0",
      "dt",       "N",       "method", "tbar_frac",      "seed",        "out",    "t",
      "dim",      "u",       "horizon", "consistent_data", "json",       "strict", "alphas",
      "betas",    "starts",  "samples", "s_max",          "tol",        "drift",  "along",
      "max_checks", "check_start", "minima", "sim"};
  return keys;
}

void Settings::set(const std::string& key, const std::string& value) {
  const std::string k = normalize_key(key);
  if (std::find(known_keys().begin(), known_keys().end(), k) == known_keys().end()) {
    throw UsageError("unknown setting '" + key + "'");
  }
  values_[k] = value;
}

bool Settings::has(const std::string& key) const { return values_.count(key) > 0; }

std::string Settings::str(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Settings::num(const std::string& key, double fallback) const {
  return has(key) ? parse_double(key, str(key)) : fallback;
}

int Settings::integer(const std::string& key, int fallback) const {
  if (!has(key)) return fallback;
  const double v = num(key, 0.0);
  if (v != std::floor(v) || std::abs(v) > 2e9) throw UsageError("'" + key + "' must be an integer");
  return static_cast<int>(v);
}

bool Settings::flag(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string v = str(key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw UsageError("'" + key + "' must be a boolean, got '" + v + "'");
}

std::vector<double> Settings::list(const std::string& key, const std::vector<double>& fallback) const {
  if (!has(key)) return fallback;
  const std::string text = trim(str(key));
  std::vector<double> out;
  if (text.empty()) return out;
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw UsageError("'" + key + "' range must be lo:hi:count");
    const double lo = parse_double(key, parts[0]);
    const double hi = parse_double(key, parts[1]);
    const double count = parse_double(key, parts[2]);
    if (count < 1 || count != std::floor(count)) throw UsageError("'" + key + "' range count must be >= 1");
    const int c = static_cast<int>(count);
    for (int i = 0; i < c; ++i) out.push_back(c == 1 ? lo : lo + (hi - lo) * i / (c - 1));
    return out;
  }
  for (const auto& part : split(text, ',')) out.push_back(parse_double(key, part));
  return out;
}

Vec Settings::vec(const std::string& key) const {
  const std::vector<double> values = list(key, {});
  if (values.empty()) throw UsageError("'" + key + "' must be a non-empty vector");
  return Eigen::Map<const Vec>(values.data(), static_cast<Eigen::Index>(values.size()));
}

void Settings::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(number) + ": expected key = value");
    }
    set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

namespace {

struct Scenario {
  std::string name;
  ProblemDef problem;
  std::optional<Scalar1DFunction> g1;
  Vec default_x0;
  std::function<SearchBox(double)> box;
  Equivalence equivalence;
};

Vec shifted(const Vec& center, double half_width, double sign) {
  return (center.array() + sign * half_width).matrix();
}

Scenario make_scenario(const Settings& s) {
  Scenario sc;
  sc.name = s.str("scenario", "example1");
  const double alpha = s.num("alpha", 0.4);
  if (sc.name == "example1") {
    const double beta = s.num("beta", 10.0);
    Example1 ex = make_example1(beta, alpha);
    sc.problem = std::move(ex.problem);
    sc.g1 = ex.g;
    sc.default_x0 = Vec::Constant(1, ex.g.y1);
    sc.box = [beta](double t) {
      const Vec c = Vec::Constant(1, beta * std::sin(t));
      return SearchBox{shifted(c, 6.0, -1.0), shifted(c, 6.0, 1.0)};
    };
  } else if (sc.name == "matrec") {
    sc.problem = make_matrix_recovery(s.flag("consistent_data", true), alpha);
    Vec x0 = Vec::Zero(6);
    x0(1) = 1.0 / std::sqrt(2.0);
    sc.default_x0 = x0;
    sc.box = [](double) {
      Vec lo(6), hi(6);
      lo << -2, -2, -1, -1, -1, -1;
      hi << 2, 2, 1, 1, 1, 1;
      return SearchBox{lo, hi};
    };
    sc.equivalence = [](const Vec& x) {
      Vec y = x;
      y.head(2) = -y.head(2);
      return y;
    };
  } else if (sc.name == "damped") {
    const int dim = s.integer("dim", 1);
    if (dim < 1) throw UsageError("'dim' must be >= 1");
    const double beta = s.num("beta", 10.0);
    const double omega = s.num("omega", 1.0);
    const double lambda = s.num("lambda", 0.0);
    Vec u = Vec::Zero(dim);
    u(0) = 1.0;
    if (s.has("u")) u = s.vec("u");
    if (u.size() != dim) throw UsageError("'u' must have 'dim' entries");
    sc.problem = make_damped_sinusoid(quartic_field(dim), beta, omega, lambda, u, s.num("horizon", kTwoPi), alpha);
    sc.default_x0 = Vec::Zero(dim);
    sc.default_x0(0) = -2.0;
    sc.box = [beta, omega, lambda, u](double t) {
      const Vec c = beta * std::exp(-lambda * t) * std::sin(omega * t) * u;
      return SearchBox{shifted(c, 6.0, -1.0), shifted(c, 6.0, 1.0)};
    };
  } else {
    throw UsageError("unknown scenario '" + sc.name + "' (expected example1, matrec or damped)");
  }
  return sc;
}

// Starting point; for matrix recovery a 2-vector gives X and the slack is
// chosen to make the point feasible at t = 0.
Vec resolve_x0(const Settings& s, const Scenario& sc) {
  Vec x = s.has("x0") ? s.vec("x0") : sc.default_x0;
  if (sc.name == "matrec" && x.size() == 2) {
    Vec full = Vec::Zero(6);
    full.head(2) = x;
    x = full;
  }
  if (x.size() != sc.problem.n) {
    throw UsageError("'x0' has " + std::to_string(x.size()) + " entries, expected " + std::to_string(sc.problem.n));
  }
  if (sc.name == "matrec" && (!s.has("x0") || s.vec("x0").size() == 2)) {
    Vec bare = x;
    bare.tail(4).setZero();
    x.tail(4) = sc.problem.constraints(bare) - sc.problem.data_path(0.0);
  }
  return x;
}

Trajectory simulate(const Settings& s, const Scenario& sc, const Vec& x0) {
  const ProblemDef& p = sc.problem;
  int steps = 0;
  double dt = 0.0;
  if (s.has("N")) {
    steps = s.integer("N", 0);
    if (steps < 1) throw UsageError("'N' must be >= 1");
    dt = p.horizon / steps;
  } else {
    dt = s.num("dt", 1e-3);
    if (!(dt > 0.0)) throw UsageError("'dt' must be positive");
    steps = std::max(1, static_cast<int>(std::lround(p.horizon / dt)));
  }
  const bool check_start = s.flag("check_start", true);
  const std::string method = s.str("method", "backward-euler");
  if (method == "discrete") {
    TrajectoryOptions opts;
    opts.check_start = check_start;
    return discrete_trajectory(p, x0, steps, opts);
  }
  if (method == "backward-euler") {
    ImplicitOptions opts;
    opts.check_start = check_start;
    return backward_euler_trajectory(p, x0, dt, opts);
  }
  if (method == "reference") {
    ReferenceOptions opts;
    opts.check_start = check_start;
    opts.intervals = steps;
    return integrate_reference(p, x0, opts);
  }
  throw UsageError("unknown method '" + method + "' (expected discrete, backward-euler or reference)");
}

json vec_json(const Vec& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

// Writes to the 'out' file when given, otherwise to the stream.
void emit(const Settings& s, std::ostream& out, const std::string& text) {
  const std::string path = s.str("out");
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path);
  if (!file) throw UsageError("cannot write '" + path + "'");
  file << text;
}

void emit_report(const Settings& s, std::ostream& out, const json& report) {
  if (s.flag("json")) {
    emit(s, out, report.dump(2) + "\n");
    return;
  }
  std::ostringstream text;
  for (const auto& [key, value] : report.items()) {
    if (value.is_array() && value.size() > 8) {
      text << key << ": [" << value.size() << " entries]\n";
    } else {
      text << key << ": " << value.dump() << "\n";
    }
  }
  emit(s, out, text.str());
}

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream os;
  const int n = traj.empty() ? 0 : static_cast<int>(traj.states.front().size());
  os << "t";
  for (int i = 0; i < n; ++i) os << ",x" << i;
  os << ",kkt_stationarity,feasibility,sigma_min,step_norm\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    os << fmt(traj.times[k]);
    for (int i = 0; i < n; ++i) os << ',' << fmt(traj.states[k](i));
    const StepDiagnostics& d = traj.diagnostics[k];
    os << ',' << fmt(d.kkt_stationarity_norm) << ',' << fmt(d.feasibility_norm) << ','
       << fmt(d.sigma_min_jacobian) << ',' << fmt(d.step_norm) << '\n';
  }
  return os.str();
}

CatalogBuilder catalog_builder(const Settings& s, const Scenario& sc) {
  CatalogOptions options;
  options.equivalence = sc.equivalence;
  const int starts = s.integer("starts", 16);
  if (starts < 1) throw UsageError("'starts' must be >= 1");
  return make_catalog_builder(sc.problem, sc.box, starts, static_cast<std::uint64_t>(s.integer("seed", 1)),
                              options);
}

Classification classify(const Settings& s, const Scenario& sc, const Trajectory& traj) {
  const double frac = s.num("tbar_frac", 0.75);
  if (!(frac >= 0.0) || !(frac < 1.0)) throw UsageError("'tbar_frac' must lie in [0, 1)");
  ClassifyOptions options;
  options.max_checks = s.integer("max_checks", 200);
  options.membership.flow.include_data_rate = s.flag("drift", true);
  return classify_trajectory(sc.problem, traj, catalog_builder(s, sc), frac * sc.problem.horizon, options);
}

json base_report(const std::string& command, const Scenario& sc) {
  json r;
  r["schema"] = 1;
  r["command"] = command;
  r["scenario"] = sc.name;
  r["alpha"] = sc.problem.alpha;
  return r;
}

int cmd_simulate(const Settings& s, std::ostream& out) {
  const Scenario sc = make_scenario(s);
  const Trajectory traj = simulate(s, sc, resolve_x0(s, sc));
  emit(s, out, trajectory_csv(traj));
  return 0;
}

int cmd_flow(const Settings& s, std::ostream& out) {
  const Scenario sc = make_scenario(s);
  const Vec x = s.has("x0") ? resolve_x0(s, sc) : sc.default_x0;
  const double t = s.num("t", 0.0);
  FlowOptions options;
  options.include_data_rate = s.flag("drift", true);
  const FlowResult res =
      frozen_time_flow(sc.problem, x, t, s.num("s_max", 100.0 * sc.problem.alpha), s.num("tol", 1e-8), options);
  json r = base_report("flow", sc);
  r["t"] = t;
  r["start"] = vec_json(x);
  r["limit"] = vec_json(res.limit);
  r["converged"] = res.converged;
  r["s_final"] = res.s_final;
  r["objective"] = sc.problem.objective(res.limit, t);
  emit_report(s, out, r);
  return 0;
}

int cmd_classify(const Settings& s, std::ostream& out) {
  const Scenario sc = make_scenario(s);
  const Trajectory traj = simulate(s, sc, resolve_x0(s, sc));
  const Classification c = classify(s, sc, traj);
  json r = base_report("classify", sc);
  if (sc.name != "matrec") r["beta"] = s.num("beta", 10.0);
  r["method"] = s.str("method", "backward-euler");
  r["t_bar"] = s.num("tbar_frac", 0.75) * sc.problem.horizon;
  r["verdict"] = to_string(c.verdict);
  r["final_state"] = vec_json(traj.final_state());
  int global = 0, other = 0, unresolved = 0;
  json records = json::array();
  for (const auto& rec : c.records) {
    if (!rec.id) {
      ++unresolved;
    } else if (rec.global) {
      ++global;
    } else {
      ++other;
    }
    records.push_back({{"t", rec.t}, {"id", rec.id ? json(*rec.id) : json(nullptr)}, {"global", rec.global}});
  }
  r["checks"] = c.records.size();
  r["global_checks"] = global;
  r["non_global_checks"] = other;
  r["unresolved_checks"] = unresolved;
  r["records"] = records;
  emit_report(s, out, r);
  return s.flag("strict") && c.verdict == Verdict::Unresolved ? 3 : 0;
}

int cmd_prop1(const Settings& s, std::ostream& out) {
  const Scenario sc = make_scenario(s);
  if (!sc.g1) throw UsageError("prop1 needs scenario example1");
  const double beta = s.num("beta", 10.0);
  const Prop1Report rep = prop1_check(*sc.g1, sc.problem.alpha, beta);
  json r = base_report("prop1", sc);
  r["beta"] = beta;
  r["C"] = rep.C;
  r["m1"] = optional_json(rep.m1);
  r["m2"] = optional_json(rep.m2);
  r["t1"] = optional_json(rep.t1);
  r["t2"] = optional_json(rep.t2);
  r["cond3_lhs"] = optional_json(rep.cond3_lhs);
  r["cond1"] = rep.cond1;
  r["cond2"] = rep.cond2;
  r["cond3"] = rep.cond3;
  r["satisfied"] = rep.satisfied;
  emit_report(s, out, r);
  return 0;
}

int cmd_thm3(const Settings& s, std::ostream& out) {
  const int dim = s.integer("dim", 1);
  if (dim < 1) throw UsageError("'dim' must be >= 1");
  std::vector<Vec> minima;
  if (s.has("minima")) {
    for (const auto& part : split(s.str("minima"), ';')) {
      std::vector<double> values;
      for (const auto& v : split(part, ',')) values.push_back(parse_double("minima", v));
      if (static_cast<int>(values.size()) != dim) throw UsageError("each entry of 'minima' needs 'dim' values");
      minima.push_back(Eigen::Map<const Vec>(values.data(), dim));
    }
  } else {
    Vec y = Vec::Zero(dim);
    y(0) = -2.0;
    minima.push_back(y);
  }
  const double R = s.num("R", 0.5), alpha = s.num("alpha", 0.4), beta = s.num("beta", 10.0);
  const double omega = s.num("omega", 1.0), lambda = s.num("lambda", 0.0);
  const Thm3Report rep = thm3_check(quartic_field(dim), minima, R, alpha, beta, omega, lambda);
  json r;
  r["schema"] = 1;
  r["command"] = "thm3";
  r["dim"] = dim;
  r["alpha"] = alpha;
  r["beta"] = beta;
  r["omega"] = omega;
  r["lambda"] = lambda;
  r["R"] = rep.R;
  r["C1"] = rep.C1;
  r["C2"] = rep.C2;
  r["cond1_lhs"] = rep.cond1_lhs;
  r["cond2_lhs"] = rep.cond2_lhs;
  r["cond1"] = rep.cond1;
  r["cond2"] = rep.cond2;
  r["necessary_ok"] = rep.necessary_ok;
  r["satisfied"] = rep.satisfied;
  emit_report(s, out, r);
  return 0;
}

json spectrum_json(const SpectrumReport& rep) {
  json eig = json::array();
  for (const auto& l : rep.eigenvalues) eig.push_back({l.real(), l.imag()});
  return {{"eigenvalues", eig}, {"n_zero", rep.n_zero}, {"n_neg", rep.n_neg},
          {"n_pos", rep.n_pos}, {"n_null", rep.n_null}, {"scale", rep.scale}};
}

int cmd_spectrum(const Settings& s, std::ostream& out) {
  const Scenario sc = make_scenario(s);
  if (s.flag("along")) {
    const int samples = s.integer("samples", 64);
    const Trajectory path = track_kkt_path(sc.problem, resolve_x0(s, sc), samples);
    std::ostringstream os;
    os << "t,max_real,n_pos,n_zero,n_neg,flagged\n";
    for (const auto& row : spectrum_along_trajectory(sc.problem, path)) {
      os << fmt(row.t) << ',' << fmt(row.max_real) << ',' << row.n_pos << ',' << row.n_zero << ',' << row.n_neg
         << ',' << (row.flagged ? 1 : 0) << '\n';
    }
    emit(s, out, os.str());
    return 0;
  }
  Vec z = s.has("x0") ? resolve_x0(s, sc) : sc.default_x0;
  const double t = s.num("t", 0.0);
  if (!s.has("x0") && sc.name == "matrec") {
    z.setZero();
    z.head(2) = matrix_recovery_global(t);
  } else if (!s.has("x0") && sc.name == "example1") {
    z(0) = sc.g1->y3 + s.num("beta", 10.0) * std::sin(t);
  }
  json r = base_report("spectrum", sc);
  r["t"] = t;
  r["z"] = vec_json(z);
  r["invariant"] = spectrum_json(eigen_report(invariant_jacobian(sc.problem, z, t)));
  r["variant"] = spectrum_json(eigen_report(variant_jacobian(sc.problem, z, t).total()));
  emit(s, out, r.dump(2) + "\n");
  return 0;
}

int cmd_sweep(const Settings& s, std::ostream& out) {
  if (s.str("scenario", "example1") != "example1") throw UsageError("sweep supports scenario example1 only");
  const std::vector<double> alphas = s.list("alphas", {0.1, 0.2, 0.3, 0.4, 0.5});
  const std::vector<double> betas = s.list("betas", {2.0, 5.0, 7.0, 10.0, 12.0});
  if (alphas.size() * betas.size() > 10000) throw UsageError("sweep grid exceeds 10^4 cells");
  const bool run_sim = s.flag("sim", true);

  std::vector<std::pair<double, double>> cells;
  for (double a : alphas) {
    for (double b : betas) cells.emplace_back(a, b);
  }
  std::sort(cells.begin(), cells.end());

  std::vector<std::string> rows(cells.size());
  parallel_for(cells.size(), [&](std::size_t i) {
    const auto [a, b] = cells[i];
    Settings cell = s;
    cell.set("alpha", fmt(a));
    cell.set("beta", fmt(b));
    std::string prop = "error";
    std::string verdict = run_sim ? "error" : "skipped";
    try {
      const Scenario sc = make_scenario(cell);
      prop = prop1_check(*sc.g1, a, b).satisfied ? "true" : "false";
      if (run_sim) {
        const Trajectory traj = simulate(cell, sc, resolve_x0(cell, sc));
        verdict = to_string(classify(cell, sc, traj).verdict);
      }
    } catch (const std::exception&) {
      // recorded in the row
    }
    rows[i] = fmt(a) + ',' + fmt(b) + ',' + prop + ',' + verdict + '\n';
  });

  std::string csv = "alpha,beta,prop1_satisfied,sim_verdict\n";
  for (const auto& row : rows) csv += row;
  emit(s, out, csv);
  return 0;
}

int cmd_validate(const Settings& s, std::ostream& out) {
  const Scenario sc = make_scenario(s);
  const int samples = s.integer("samples", 100);
  if (samples < 1) throw UsageError("'samples' must be >= 1");
  const auto seed = static_cast<std::uint64_t>(s.integer("seed", 1));
  const ValidationReport rep = validate_problem(sc.problem, samples, seed);
  json r = base_report("validate", sc);
  r["samples"] = rep.samples;
  r["seed"] = rep.seed;
  r["passed"] = rep.passed();
  json checks = json::array();
  for (const auto& c : rep.checks) {
    checks.push_back({{"name", c.name}, {"max_rel_deviation", c.max_rel_deviation}, {"passed", c.passed}});
  }
  r["checks"] = checks;
  r["invariant_failures"] = rep.invariant_failures;
  emit_report(s, out, r);
  return 0;
}

std::string option_help(const std::string& key) {
  static const std::map<std::string, std::string> help = {
      {"scenario", "example1 | matrec | damped"},
      {"alpha", "proximal weight"},
      {"beta", "amplitude of the moving landscape"},
      {"omega", "damped: angular frequency"},
      {"lambda", "damped: decay rate"},
      {"R", "thm3: ball radius"},
      {"x0", "start point, comma separated"},
      {"dt", "time step"},
      {"N", "number of steps (overrides dt)"},
      {"method", "discrete | backward-euler | reference"},
      {"tbar_frac", "classify from t_bar = tbar_frac * T"},
      {"seed", "multistart / sampling seed"},
      {"out", "write output to this file"},
      {"t", "time at which to evaluate"},
      {"dim", "damped/thm3: dimension"},
      {"u", "damped: unit direction"},
      {"horizon", "damped: final time"},
      {"consistent_data", "matrec: derive d(t) from the planted path"},
      {"alphas", "sweep: list or lo:hi:count"},
      {"betas", "sweep: list or lo:hi:count"},
      {"starts", "multistart points per catalog"},
      {"samples", "spectrum/validate: sample count"},
      {"s_max", "flow: pseudo-time limit"},
      {"tol", "flow: stop when |dx/ds| <= tol"},
      {"drift", "keep the data-rate term in the frozen flow"},
      {"max_checks", "classify: membership checks after t_bar"},
      {"check_start", "require a KKT start point"},
      {"minima", "thm3: ';'-separated minima"},
      {"sim", "sweep: also simulate and classify"}};
  const auto it = help.find(key);
  return it == help.end() ? std::string() : it->second;
}

void report_error(std::ostream& err, const std::string& kind, const std::string& message, int code) {
  err << json{{"error", kind}, {"message", message}, {"exit_code", code}}.dump() << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulate and classify trajectories of time-varying constrained problems", "tvl"};
  app.require_subcommand(1);
  app.fallthrough();

  std::map<std::string, std::string> given;
  std::string config_path;
  bool json_flag = false, strict_flag = false, along_flag = false;
  app.add_option("--config", config_path, "Flat key=value config file");
  for (const auto& key : known_keys()) {
    if (key == "json" || key == "strict" || key == "along") continue;
    std::string names = "--" + key;
    std::string dashed = key;
    std::replace(dashed.begin(), dashed.end(), '_', '-');
    if (dashed != key) names += ",--" + dashed;
    app.add_option(names, given[key], option_help(key));
  }
  app.add_flag("--json", json_flag, "Emit the report as JSON");
  app.add_flag("--strict", strict_flag, "Exit with code 3 when the verdict is unresolved");
  app.add_flag("--along", along_flag, "spectrum: sample along the KKT path (CSV)");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"simulate", "Write a trajectory as CSV"},
      {"flow", "Run the frozen-time flow from a point"},
      {"classify", "Simulate and classify a trajectory"},
      {"prop1", "Check the one-dimensional escape conditions"},
      {"thm3", "Check the damped-sinusoid escape conditions"},
      {"spectrum", "Eigenvalues of the ODE Jacobians"},
      {"sweep", "Grid of condition checks and simulated verdicts (CSV)"},
      {"validate", "Finite-difference check of a scenario's derivatives"}};
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    report_error(err, "usage", e.what(), 1);
    return 1;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    Settings settings;
    if (!config_path.empty()) settings.load_file(config_path);
    for (const auto& key : known_keys()) {
      const auto opt = app.get_option_no_throw("--" + key);
      if (opt != nullptr && opt->count() > 0) settings.set(key, given[key]);
    }
    if (json_flag) settings.set("json", "true");
    if (strict_flag) settings.set("strict", "true");
    if (along_flag) settings.set("along", "true");

    if (command == "simulate") return cmd_simulate(settings, out);
    if (command == "flow") return cmd_flow(settings, out);
    if (command == "classify") return cmd_classify(settings, out);
    if (command == "prop1") return cmd_prop1(settings, out);
    if (command == "thm3") return cmd_thm3(settings, out);
    if (command == "spectrum") return cmd_spectrum(settings, out);
    if (command == "sweep") return cmd_sweep(settings, out);
    return cmd_validate(settings, out);
  } catch (const NumericalError& e) {
    report_error(err, "numerical", e.what(), 2);
    return 2;
  } catch (const InitializationError& e) {
    report_error(err, "initialization", e.what(), 1);
    return 1;
  } catch (const std::invalid_argument& e) {
    report_error(err, "usage", e.what(), 1);
    return 1;
  } catch (const std::exception& e) {
    report_error(err, "numerical", e.what(), 2);
    return 2;
  }
}

}  // namespace tvl::cli
