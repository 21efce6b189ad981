// Command-line front end for the trimmed-L1 location toolkit.
//
// Subcommands:
//   estimate      fit a location estimate to a CSV dataset
//   simulate      run one seeded contamination scenario and report MSE
//   oracle-check  compare the estimate against the enumeration oracles
//   tables        write the full simulation report tables
//
// Exit codes: 0 success, 2 input or I/O error, 3 instance too large for the
// enumeration oracle.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "ltad/csv.hpp"
#include "ltad/driver.hpp"
#include "ltad/objectives.hpp"
#include "ltad/oracle.hpp"
#include "ltad/parallel.hpp"
#include "ltad/simulation.hpp"

namespace {

using nlohmann::ordered_json;

// "--h 0.5" is a coverage fraction, "--h 25" an absolute count; the decimal
// point disambiguates. Fractions resolve to round(f * n) clamped to [1, n].
int resolve_coverage(const std::string& h_spec, int n) {
  if (h_spec.empty()) throw std::invalid_argument("invalid coverage");
  std::size_t pos = 0;
  if (h_spec.find('.') != std::string::npos) {
    const double f = std::stod(h_spec, &pos);
    if (pos != h_spec.size() || f <= 0.0 || f > 1.0)
      throw std::invalid_argument("invalid coverage: " + h_spec);
    return std::clamp(static_cast<int>(std::lround(f * n)), 1, n);
  }
  const long h = std::stol(h_spec, &pos);
  if (pos != h_spec.size() || h < 1 || h > n)
    throw std::invalid_argument("invalid coverage: " + h_spec);
  return static_cast<int>(h);
}

double parse_real(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  const double v = std::stod(value, &pos);
  if (pos != value.size()) throw std::invalid_argument("bad value for " + key + ": " + value);
  return v;
}

long parse_count(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  const long v = std::stol(value, &pos);
  if (pos != value.size()) throw std::invalid_argument("bad value for " + key + ": " + value);
  return v;
}

bool parse_flag(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "on") return true;
  if (value == "false" || value == "0" || value == "off") return false;
  throw std::invalid_argument("bad value for " + key + ": " + value);
}

struct Overrides {
  ltad::DriverConfig driver;
  int heuristic_max_steps = 100;
  int heuristic_restarts = 10;
};

Overrides apply_overrides(const std::vector<std::string>& pairs) {
  Overrides o;
  for (const auto& pair : pairs) {
    const auto eq = pair.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("expected key=value, got: " + pair);
    const std::string key = pair.substr(0, eq);
    const std::string value = pair.substr(eq + 1);
    auto& solver = o.driver.solver;
    if (key == "m_tolerance") o.driver.m_tolerance = parse_real(key, value);
    else if (key == "max_outer_iterations")
      o.driver.max_outer_iterations = static_cast<int>(parse_count(key, value));
    else if (key == "refit_median") o.driver.refit_median = parse_flag(key, value);
    else if (key == "step_alpha") solver.step_alpha = parse_real(key, value);
    else if (key == "step_schedule") {
      if (value == "constant") solver.step_schedule = ltad::StepSchedule::Constant;
      else if (value == "diminishing") solver.step_schedule = ltad::StepSchedule::Diminishing;
      else throw std::invalid_argument("bad value for step_schedule: " + value);
    } else if (key == "w_tolerance") solver.w_tolerance = parse_real(key, value);
    else if (key == "max_iterations")
      solver.max_iterations = static_cast<int>(parse_count(key, value));
    else if (key == "stall_iterations")
      solver.stall_iterations = static_cast<int>(parse_count(key, value));
    else if (key == "tie_tolerance") solver.tie_tolerance = parse_real(key, value);
    else if (key == "projection_mode") {
      if (value == "exact") solver.projection_mode = ltad::ProjectionMode::ExactCappedSimplex;
      else if (value == "two-step")
        solver.projection_mode = ltad::ProjectionMode::HyperplaneThenClip;
      else throw std::invalid_argument("bad value for projection_mode: " + value);
    } else if (key == "init_mode") {
      if (value == "alternating") solver.init_mode = ltad::InitMode::AlternatingDual;
      else if (value == "uniform") solver.init_mode = ltad::InitMode::Uniform;
      else throw std::invalid_argument("bad value for init_mode: " + value);
    } else if (key == "max_steps")
      o.heuristic_max_steps = static_cast<int>(parse_count(key, value));
    else if (key == "restarts") o.heuristic_restarts = static_cast<int>(parse_count(key, value));
    else throw std::invalid_argument("unknown config key: " + key);
  }
  return o;
}

ordered_json vector_json(const Eigen::VectorXd& v) {
  ordered_json arr = ordered_json::array();
  for (int j = 0; j < v.size(); ++j) arr.push_back(v[j]);
  return arr;
}

ordered_json selection_json(const ltad::Selection& T) {
  ordered_json arr = ordered_json::array();
  for (const int i : T.indices) arr.push_back(i + 1);
  return arr;
}

std::string join_selection(const ltad::Selection& T) {
  std::string s;
  for (std::size_t k = 0; k < T.indices.size(); ++k) {
    if (k > 0) s += ';';
    s += std::to_string(T.indices[k] + 1);
  }
  return s;
}

void emit_estimate_csv(const std::string& method, int h, const ltad::EstimationResult& r) {
  std::string header = "method,h,objective,converged,integrality_gap,iterations,selection";
  std::string row = method + "," + std::to_string(h) + "," +
                    ltad::format_exact(r.estimate.objective) + "," +
                    (r.converged ? "true" : "false") + "," +
                    ltad::format_exact(r.integrality_gap) + "," +
                    std::to_string(r.outer_iterations) + "," +
                    ltad::csv_field(join_selection(r.selection));
  for (int j = 0; j < r.estimate.m.size(); ++j) {
    header += ",m_" + std::to_string(j + 1);
    row += "," + ltad::format_exact(r.estimate.m[j]);
  }
  std::cout << header << '\n' << row << '\n';
}

int run_estimate(const std::string& input, const std::string& h_spec, const std::string& method,
                 std::uint64_t seed, const std::string& format, bool standardize,
                 const std::vector<std::string>& sets) {
  const ltad::DataMatrix X = ltad::ingest_csv(input);
  const int h = resolve_coverage(h_spec, X.n());
  Overrides o = apply_overrides(sets);
  o.driver.standardize = standardize;

  ltad::EstimationResult result;
  if (method == "lp") {
    result = ltad::estimate_ltad(X, h, o.driver);
  } else if (method == "heuristic") {
    result = ltad::heuristic_ltad(X, h, o.heuristic_max_steps, o.heuristic_restarts, seed);
  } else if (method == "oracle") {
    const ltad::OracleResult oracle = ltad::solve_exact_trimmed(X, h);
    result.estimate = ltad::LocationEstimate{oracle.m, Eigen::VectorXd::Zero(X.p()), true,
                                             oracle.objective};
    result.selection = oracle.selection;
    Eigen::VectorXd w = Eigen::VectorXd::Zero(X.n());
    for (const int i : oracle.selection.indices) w[i] = 1.0;
    result.weights = ltad::WeightVector(std::move(w), h);
    result.converged = true;
    result.m_shift = oracle.m;
    result.m_refit = oracle.m;
    result.m_residual = Eigen::VectorXd::Zero(X.p());
  } else {
    throw std::invalid_argument("unknown method: " + method);
  }

  if (format == "csv") {
    emit_estimate_csv(method, h, result);
    return 0;
  }
  ordered_json out;
  out["method"] = method;
  out["h"] = h;
  out["m"] = vector_json(result.estimate.m);
  out["m_refit"] = vector_json(result.m_refit);
  out["m_shift"] = vector_json(result.m_shift);
  out["selection"] = selection_json(result.selection);
  out["objective"] = result.estimate.objective;
  out["converged"] = result.converged;
  out["integrality_gap"] = result.integrality_gap;
  out["iterations"] = result.outer_iterations;
  std::cout << out.dump(2) << '\n';
  return 0;
}

int run_simulate(int n, int p, double epsilon, const std::string& kind, double rho,
                 const std::string& h_spec, int reps, std::uint64_t seed,
                 const std::string& estimators_csv, const std::string& format) {
  ltad::ScenarioSpec spec;
  spec.n = n;
  spec.p = p;
  spec.contamination_fraction = epsilon;
  if (kind == "none") spec.kind = ltad::Contamination::None;
  else if (kind == "strong") spec.kind = ltad::Contamination::Strong;
  else if (kind == "intermediate") spec.kind = ltad::Contamination::Intermediate;
  else throw std::invalid_argument("unknown contamination kind: " + kind);
  spec.correlation_rho = rho;
  const int h = resolve_coverage(h_spec, n);
  spec.coverage_fraction = static_cast<double>(h) / n;
  spec.replications = reps;
  spec.seed = seed;

  std::vector<std::string> estimators;
  std::string cur;
  for (const char ch : estimators_csv + ",") {
    if (ch == ',') {
      if (!cur.empty()) estimators.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }

  const ltad::MseReport report = ltad::run_scenario(spec, estimators, ltad::worker_count());
  if (format == "csv") {
    std::cout << "estimator,MSE\n";
    for (const auto& [name, mse] : report.per_estimator)
      std::cout << name << ',' << ltad::format_sig6(mse) << '\n';
    return 0;
  }
  ordered_json out;
  out["n"] = spec.n;
  out["p"] = spec.p;
  out["epsilon"] = spec.contamination_fraction;
  out["contamination"] = kind;
  out["rho"] = spec.correlation_rho;
  out["h"] = h;
  out["replications"] = spec.replications;
  out["seed"] = spec.seed;
  ordered_json mse;
  for (const auto& [name, value] : report.per_estimator) mse[name] = value;
  out["mse"] = mse;
  out["skipped"] = report.skipped;
  std::cout << out.dump(2) << '\n';
  return 0;
}

int run_oracle_check(const std::string& input, const std::string& h_spec) {
  const ltad::DataMatrix X = ltad::ingest_csv(input);
  const int h = resolve_coverage(h_spec, X.n());

  const ltad::OracleResult trimmed = ltad::solve_exact_trimmed(X, h);
  const ltad::OracleResult penalized = ltad::solve_exact_penalized(X, h);
  const ltad::EstimationResult lp = ltad::estimate_ltad(X, h);

  ordered_json out;
  out["h"] = h;
  out["trimmed"] = {{"m", vector_json(trimmed.m)},
                    {"objective", trimmed.objective},
                    {"selection", selection_json(trimmed.selection)}};
  out["penalized"] = {{"m", vector_json(penalized.m)},
                      {"objective", penalized.objective},
                      {"selection", selection_json(penalized.selection)}};
  out["lp"] = {{"m", vector_json(lp.estimate.m)},
               {"objective", lp.estimate.objective},
               {"selection", selection_json(lp.selection)},
               {"objective_ratio", lp.estimate.objective / std::max(trimmed.objective, 1e-300)},
               {"integrality_gap", lp.integrality_gap},
               {"converged", lp.converged}};
  std::cout << out.dump(2) << '\n';
  return 0;
}

int run_tables(const std::string& out_dir, std::uint64_t seed) {
  const std::vector<std::string> files =
      ltad::paper_table_suite(out_dir, seed, ltad::worker_count());
  for (const auto& f : files) std::cout << f << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trimmed-L1 multivariate location estimation"};
  // --h is the coverage option, so the help flag keeps only its long name.
  app.set_help_flag("--help", "print usage and exit");
  app.require_subcommand(1);

  std::string input;
  std::string h_spec = "0.5";
  std::string method = "lp";
  std::string format = "json";
  std::string out_dir = "tables";
  std::string kind = "none";
  std::string estimators = "lp-ltad,heuristic,mean";
  std::uint64_t seed = 0;
  bool standardize = false;
  std::vector<std::string> sets;
  int n = 50;
  int p = 1;
  double epsilon = 0.0;
  double rho = 0.0;
  int reps = 100;

  CLI::App* estimate = app.add_subcommand("estimate", "fit a location estimate to a CSV file");
  estimate->add_option("--input", input, "CSV dataset")->required();
  estimate->add_option("--h", h_spec, "coverage: count, or fraction of n if it contains '.'");
  estimate->add_option("--method", method, "lp | heuristic | oracle");
  estimate->add_option("--seed", seed, "seed for heuristic restarts");
  estimate->add_option("--format", format, "json | csv");
  estimate->add_option("--set", sets, "config override key=value");
  estimate->add_flag("--standardize", standardize, "scale columns by MAD before fitting");

  CLI::App* simulate = app.add_subcommand("simulate", "run one contamination scenario");
  simulate->add_option("--n", n, "sample size");
  simulate->add_option("--p", p, "dimension");
  simulate->add_option("--epsilon", epsilon, "contamination fraction");
  simulate->add_option("--kind", kind, "none | strong | intermediate");
  simulate->add_option("--rho", rho, "constant correlation of the clean rows");
  simulate->add_option("--h", h_spec, "coverage: count, or fraction of n if it contains '.'");
  simulate->add_option("--reps", reps, "replications");
  simulate->add_option("--seed", seed, "scenario seed");
  simulate->add_option("--estimators", estimators, "comma-separated estimator names");
  simulate->add_option("--format", format, "json | csv");

  CLI::App* oracle_check =
      app.add_subcommand("oracle-check", "compare the estimate against the exact oracles");
  oracle_check->add_option("--input", input, "CSV dataset")->required();
  oracle_check->add_option("--h", h_spec, "coverage: count, or fraction of n if it contains '.'");

  CLI::App* tables = app.add_subcommand("tables", "write the simulation report tables");
  tables->add_option("--out-dir", out_dir, "output directory");
  tables->add_option("--seed", seed, "suite seed");

  try {
    app.parse(argc, argv);
    if (estimate->parsed())
      return run_estimate(input, h_spec, method, seed, format, standardize, sets);
    if (simulate->parsed())
      return run_simulate(n, p, epsilon, kind, rho, h_spec, reps, seed, estimators, format);
    if (oracle_check->parsed()) return run_oracle_check(input, h_spec);
    if (tables->parsed()) return run_tables(out_dir, seed);
    return 2;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  } catch (const ltad::SizeGuardError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
