#include "ltad/simulation.hpp"

#include <json.hpp>

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "ltad/csv.hpp"
#include "ltad/driver.hpp"
#include "ltad/oracle.hpp"
#include "ltad/parallel.hpp"
#include "ltad/rng.hpp"

namespace ltad {

namespace {

// Substream salts keeping data draws and heuristic restarts independent.
constexpr std::uint64_t kDataStream = 0x64617461;
constexpr std::uint64_t kRestartStream = 0x72737472;

constexpr std::uint64_t kOracleCap = 2'000'000;

const char* contamination_name(Contamination kind) {
  switch (kind) {
    case Contamination::None: return "none";
    case Contamination::Strong: return "strong";
    case Contamination::Intermediate: return "intermediate";
  }
  return "none";
}

}  // namespace

void ScenarioSpec::validate() const {
  detail::require(n >= 1 && p >= 1, "empty scenario");
  detail::require(contamination_fraction >= 0.0 && contamination_fraction < 1.0,
                  "contamination fraction outside [0, 1)");
  detail::require((contamination_fraction == 0.0) == (kind == Contamination::None),
                  "contamination kind inconsistent with fraction");
  detail::require(correlation_rho >= 0.0 && correlation_rho < 1.0,
                  "correlation outside [0, 1)");
  detail::require(coverage_fraction > 0.0 && coverage_fraction <= 1.0, "invalid coverage");
  detail::require(replications >= 1, "no replications");
  detail::require(contaminated_rows() + 1 <= n, "contamination leaves no clean rows");
}

int ScenarioSpec::contaminated_rows() const {
  if (contamination_fraction == 0.0) return 0;
  // Nudge below the product so representable fractions like 0.2 * 50 do not
  // round up through the ceiling.
  return static_cast<int>(std::ceil(contamination_fraction * n - 1e-9));
}

int ScenarioSpec::coverage_h() const {
  const auto h = static_cast<int>(std::lround(coverage_fraction * n));
  return std::clamp(h, 1, n);
}

GeneratedDataset generate_dataset(const ScenarioSpec& spec, int replication) {
  spec.validate();
  detail::require(replication >= 0, "invalid replication index");
  const int n = spec.n;
  const int p = spec.p;

  Eigen::MatrixXd chol;
  if (spec.correlation_rho != 0.0) {
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Constant(p, p, spec.correlation_rho);
    sigma.diagonal().setOnes();
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    detail::require(llt.info() == Eigen::Success, "covariance not positive definite");
    chol = llt.matrixL();
  }

  const int c = spec.contaminated_rows();
  const double shift = spec.kind == Contamination::Strong ? 3.3 : 0.75;
  const double spread = spec.kind == Contamination::Strong ? 0.3 : std::sqrt(0.5);

  Eigen::MatrixXd X(n, p);
  Eigen::VectorXd z(p);
  const auto rep = static_cast<std::uint64_t>(replication);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j)
      z[j] = rng::normal(rng::key(spec.seed, kDataStream, rep, static_cast<std::uint64_t>(i),
                                  static_cast<std::uint64_t>(j)));
    if (i < c) {
      X.row(i) = (shift + spread * z.array()).transpose();
    } else if (chol.size() > 0) {
      X.row(i) = (chol * z).transpose();
    } else {
      X.row(i) = z.transpose();
    }
  }
  return GeneratedDataset{DataMatrix(std::move(X)), c};
}

MseReport run_scenario(const ScenarioSpec& spec, const std::vector<std::string>& estimators,
                       int workers) {
  spec.validate();
  const int h = spec.coverage_h();

  MseReport report;
  report.scenario = spec;
  report.replications = spec.replications;

  std::vector<std::string> active;
  std::map<std::string, std::vector<Eigen::VectorXd>> estimates;
  for (const auto& name : estimators) {
    detail::require(name == "lp-ltad" || name == "heuristic" || name == "mean" ||
                        name == "oracle",
                    "unknown estimator: " + name);
    if (name == "oracle" && subset_count(spec.n, h, kOracleCap) > kOracleCap) {
      report.skipped.push_back(name);
      continue;
    }
    active.push_back(name);
    estimates[name].assign(static_cast<std::size_t>(spec.replications),
                           Eigen::VectorXd::Zero(spec.p));
  }

  parallel_for(spec.replications, workers, [&](int r) {
    const GeneratedDataset data = generate_dataset(spec, r);
    for (const auto& name : active) {
      Eigen::VectorXd m;
      if (name == "lp-ltad") {
        DriverConfig cfg;
        cfg.refit_median = false;
        m = estimate_ltad(data.X, h, cfg).estimate.m;
      } else if (name == "heuristic") {
        const std::uint64_t restart_seed =
            rng::key(spec.seed, kRestartStream, static_cast<std::uint64_t>(r));
        m = heuristic_ltad(data.X, h, 100, 10, restart_seed).estimate.m;
      } else if (name == "mean") {
        m = data.X.values().colwise().mean().transpose();
      } else {
        m = solve_exact_trimmed(data.X, h).m;
      }
      estimates.at(name)[static_cast<std::size_t>(r)] = std::move(m);
    }
  });

  for (const auto& [name, per_rep] : estimates) {
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(spec.p);
    auto& norms = report.squared_norms[name];
    norms.reserve(per_rep.size());
    for (const Eigen::VectorXd& m : per_rep) {
      mean += m;
      norms.push_back(m.squaredNorm());
    }
    mean /= static_cast<double>(spec.replications);
    report.per_estimator[name] = mean.squaredNorm();
    report.mean_estimate[name] = std::move(mean);
  }
  return report;
}

namespace {

using nlohmann::ordered_json;

constexpr int kReplications = 100;

struct SuiteContext {
  std::filesystem::path dir;
  std::uint64_t seed = 0;
  int workers = 1;
  std::vector<std::string> files;
  ordered_json grid = ordered_json::array();
};

ScenarioSpec make_spec(int n, int p, double eps, Contamination kind, double rho,
                       double coverage, std::uint64_t seed) {
  ScenarioSpec s;
  s.n = n;
  s.p = p;
  s.contamination_fraction = eps;
  s.kind = eps == 0.0 ? Contamination::None : kind;
  s.correlation_rho = rho;
  s.coverage_fraction = coverage;
  s.replications = kReplications;
  s.seed = seed;
  return s;
}

void write_table(SuiteContext& ctx, const std::string& name,
                 const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows) {
  const std::filesystem::path path = ctx.dir / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k > 0) out << ',';
      out << csv_field(cells[k]);
    }
    out << '\n';
  };
  emit(header);
  for (const auto& row : rows) emit(row);
  out.flush();
  if (!out) throw std::runtime_error("cannot write " + path.string());
  ctx.files.push_back(name);
}

// One contamination cell: lp-ltad at the cell coverage, the concentration
// heuristic always at 50% coverage, and the sample mean. Data generation
// does not depend on coverage, so all three see identical replications.
void append_mse_rows(SuiteContext& ctx, std::vector<std::vector<std::string>>& rows, int n,
                     int p, double eps, Contamination kind, double rho,
                     const std::vector<int>& lp_h_percents) {
  const Contamination effective = eps == 0.0 ? Contamination::None : kind;
  auto row = [&](int h_percent, const std::string& estimator, double mse) {
    rows.push_back({std::to_string(n), std::to_string(p), format_sig6(eps),
                    std::to_string(h_percent), contamination_name(effective), estimator,
                    format_sig6(mse)});
  };
  for (const int hp : lp_h_percents) {
    const auto r = run_scenario(make_spec(n, p, eps, kind, rho, hp / 100.0, ctx.seed),
                                {"lp-ltad"}, ctx.workers);
    row(hp, "lp-ltad", r.per_estimator.at("lp-ltad"));
  }
  const auto rh = run_scenario(make_spec(n, p, eps, kind, rho, 0.5, ctx.seed), {"heuristic"},
                               ctx.workers);
  row(50, "heuristic", rh.per_estimator.at("heuristic"));
  const auto rm =
      run_scenario(make_spec(n, p, eps, kind, rho, 1.0, ctx.seed), {"mean"}, ctx.workers);
  row(100, "mean", rm.per_estimator.at("mean"));
}

const std::vector<std::string> kMseHeader = {"n",         "p",           "epsilon",  "h_percent",
                                             "contamination", "estimator", "MSE"};

void describe(SuiteContext& ctx, const std::string& file, const ordered_json& cells) {
  ordered_json entry;
  entry["file"] = file;
  for (const auto& [k, v] : cells.items()) entry[k] = v;
  entry["replications"] = kReplications;
  ctx.grid.push_back(entry);
}

void efficiency_table(SuiteContext& ctx) {
  std::vector<std::vector<std::string>> rows;
  for (const int hp : {50, 60, 70, 80}) {
    for (const std::string est : {"lp-ltad", "heuristic"}) {
      const auto r = run_scenario(
          make_spec(100, 1, 0.0, Contamination::None, 0.0, hp / 100.0, ctx.seed), {est},
          ctx.workers);
      const double mean_abs = r.mean_estimate.at(est).norm();
      rows.push_back({"100", std::to_string(hp), est, format_sig6(mean_abs)});
    }
  }
  write_table(ctx, "table1_efficiency.csv", {"n", "h_percent", "estimator", "mean_abs_estimate"},
              rows);
  describe(ctx, "table1_efficiency.csv",
           {{"n", {100}}, {"p", {1}}, {"h_percent", {50, 60, 70, 80}},
            {"contamination", "none"}, {"estimators", {"lp-ltad", "heuristic"}}});
}

void contamination_table(SuiteContext& ctx, const std::string& file, const std::vector<int>& ns,
                         const std::vector<int>& ps, const std::vector<double>& epss,
                         const std::vector<Contamination>& kinds, double rho,
                         const std::vector<int>& lp_h_percents) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> kind_names;
  for (const Contamination kind : kinds) kind_names.emplace_back(contamination_name(kind));
  for (const int n : ns)
    for (const int p : ps)
      for (const double eps : epss)
        for (std::size_t k = 0; k < kinds.size(); ++k) {
          if (eps == 0.0 && k > 0) continue;  // clean cell is kind-independent
          append_mse_rows(ctx, rows, n, p, eps, kinds[k], rho, lp_h_percents);
        }
  write_table(ctx, file, kMseHeader, rows);
  describe(ctx, file,
           {{"n", ns}, {"p", ps}, {"epsilon", epss}, {"contamination", kind_names},
            {"rho", rho}, {"lp_h_percent", lp_h_percents},
            {"estimators", {"lp-ltad", "heuristic", "mean"}}});
}

}  // namespace

std::vector<std::string> paper_table_suite(const std::string& output_dir, std::uint64_t seed,
                                           int workers) {
  SuiteContext ctx;
  ctx.dir = output_dir;
  ctx.seed = seed;
  ctx.workers = std::max(1, workers);

  std::error_code ec;
  std::filesystem::create_directories(ctx.dir, ec);
  if (!std::filesystem::is_directory(ctx.dir))
    throw std::runtime_error("cannot write " + ctx.dir.string());

  const std::vector<Contamination> strong = {Contamination::Strong};
  const std::vector<Contamination> intermediate = {Contamination::Intermediate};
  const std::vector<Contamination> both = {Contamination::Strong, Contamination::Intermediate};

  efficiency_table(ctx);
  contamination_table(ctx, "strong_n50_h50.csv", {50}, {1, 2, 3}, {0.0, 0.2, 0.4}, strong, 0.0,
                      {50});
  contamination_table(ctx, "strong_n50_h20.csv", {50}, {1, 2, 3}, {0.0, 0.2, 0.4}, strong, 0.0,
                      {20});
  contamination_table(ctx, "strong_n100_h20.csv", {100}, {1, 3, 5}, {0.0, 0.2, 0.4}, strong, 0.0,
                      {20});
  contamination_table(ctx, "correlated_n50.csv", {50}, {2, 3}, {0.0, 0.2, 0.4}, strong, 0.7,
                      {50, 20});
  contamination_table(ctx, "correlated_n100.csv", {100}, {3, 5}, {0.0, 0.2, 0.4}, strong, 0.7,
                      {20});
  contamination_table(ctx, "intermediate_h20.csv", {50, 100}, {1, 3}, {0.2, 0.4}, intermediate,
                      0.0, {20});
  contamination_table(ctx, "large_n500_h20.csv", {500}, {10, 20}, {0.2, 0.4}, both, 0.0, {20});

  ordered_json manifest;
  manifest["seed"] = seed;
  manifest["spec_grid"] = ctx.grid;
  manifest["versions"] = {{"toolkit", "1.0.0"},
                          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                        std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                        std::to_string(EIGEN_MINOR_VERSION)}};
  manifest["timestamp_omitted_for_determinism"] = true;

  const std::filesystem::path mpath = ctx.dir / "manifest.json";
  std::ofstream mout(mpath, std::ios::binary);
  if (!mout) throw std::runtime_error("cannot write " + mpath.string());
  mout << manifest.dump(2) << '\n';
  mout.flush();
  if (!mout) throw std::runtime_error("cannot write " + mpath.string());
  ctx.files.push_back("manifest.json");
  return ctx.files;
}

}  // namespace ltad
