#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ltad/types.hpp"

namespace ltad {

enum class Contamination { None, Strong, Intermediate };

// One simulation cell. Clean rows are N_p(0, Sigma) with Sigma either the
// identity or the constant-correlation matrix with off-diagonal rho. The
// first ceil(fraction * n) rows are replaced by the contaminating law:
// strong is N_p(3.3 * 1, 0.3^2 I), intermediate is N_p(0.75 * 1, 0.5 I).
struct ScenarioSpec {
  int n = 50;
  int p = 1;
  double contamination_fraction = 0.0;
  Contamination kind = Contamination::None;
  double correlation_rho = 0.0;
  double coverage_fraction = 0.5;
  int replications = 100;
  std::uint64_t seed = 0;

  void validate() const;
  int contaminated_rows() const;
  int coverage_h() const;  // round(coverage_fraction * n), clamped to [1, n]
};

struct GeneratedDataset {
  DataMatrix X;
  int contaminated_count = 0;  // rows [0, contaminated_count) are outliers
};

// Deterministic draw of replication `replication` of the scenario. Every
// matrix entry is keyed by (seed, replication, row, column), so any single
// entry reproduces independently of the rest.
GeneratedDataset generate_dataset(const ScenarioSpec& spec, int replication);

struct MseReport {
  ScenarioSpec scenario;
  int replications = 0;
  std::map<std::string, double> per_estimator;               // ||mean_estimate||^2 by name
  std::map<std::string, Eigen::VectorXd> mean_estimate;      // average of m_hat over reps
  std::map<std::string, std::vector<double>> squared_norms;  // per replication ||m_hat||^2
  std::vector<std::string> skipped;
};

// Runs the scenario for the named estimators ("lp-ltad", "heuristic",
// "mean", "oracle"). The headline MSE figure is the squared norm of the
// replication-averaged estimate; the per-replication squared norms are kept
// alongside. The oracle is skipped (and reported as such) when C(n, h)
// exceeds the enumeration guard. Replications run in parallel on `workers`
// threads with per-replication result slots, so the report does not depend
// on the thread count.
MseReport run_scenario(const ScenarioSpec& spec, const std::vector<std::string>& estimators,
                       int workers = 1);

// Full simulation grid. Writes eight CSV tables plus manifest.json into
// output_dir and returns the written file names (tables first, manifest
// last). Re-running with the same seed writes byte-identical files.
std::vector<std::string> paper_table_suite(const std::string& output_dir, std::uint64_t seed,
                                           int workers = 1);

}  // namespace ltad
