#include "ltad/driver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include "ltad/objectives.hpp"
#include "ltad/rng.hpp"

namespace ltad {

namespace {

Eigen::VectorXd median_of_rows(const DataMatrix& X, const Selection& T) {
  Eigen::VectorXd m(X.p());
  std::vector<double> buf(T.indices.size());
  for (int j = 0; j < X.p(); ++j) {
    for (std::size_t k = 0; k < T.indices.size(); ++k)
      buf[k] = X.values()(T.indices[k], j);
    m[j] = detail::median_inplace(buf);
  }
  return m;
}

std::vector<double> l1_distances(const DataMatrix& X, const Eigen::VectorXd& m) {
  std::vector<double> d(static_cast<std::size_t>(X.n()));
  for (int i = 0; i < X.n(); ++i)
    d[static_cast<std::size_t>(i)] = (X.values().row(i).transpose() - m).lpNorm<1>();
  return d;
}

Selection nearest_rows(const DataMatrix& X, const Eigen::VectorXd& m, int h) {
  const auto dist = l1_distances(X, m);
  std::vector<int> order(static_cast<std::size_t>(X.n()));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double da = dist[static_cast<std::size_t>(a)];
    const double db = dist[static_cast<std::size_t>(b)];
    if (da != db) return da < db;
    return a < b;
  });
  Selection T;
  T.indices.assign(order.begin(), order.begin() + h);
  std::sort(T.indices.begin(), T.indices.end());
  return T;
}

// Steepest single-swap descent on the trimmed objective. Desk scale only:
// every sweep evaluates all h*(n-h) exchanges at their refit medians.
void exchange_descent(const DataMatrix& X, int h, Selection& T, Eigen::VectorXd& m,
                      double& objective) {
  const int n = X.n();
  if (static_cast<long long>(h) * (n - h) > 2048) return;
  std::vector<char> selected(static_cast<std::size_t>(n), 0);
  for (const int i : T.indices) selected[static_cast<std::size_t>(i)] = 1;

  for (int sweep = 0; sweep < 64; ++sweep) {
    double best_obj = objective;
    Selection best_T;
    Eigen::VectorXd best_m;
    for (int out = 0; out < n; ++out) {
      if (!selected[static_cast<std::size_t>(out)]) continue;
      for (int in = 0; in < n; ++in) {
        if (selected[static_cast<std::size_t>(in)]) continue;
        Selection trial = T;
        *std::find(trial.indices.begin(), trial.indices.end(), out) = in;
        std::sort(trial.indices.begin(), trial.indices.end());
        const Eigen::VectorXd trial_m = median_of_rows(X, trial);
        const double trial_obj = ltad_objective(X, trial, trial_m);
        if (trial_obj < best_obj - 1e-12 * (1.0 + std::abs(best_obj))) {
          best_obj = trial_obj;
          best_T = std::move(trial);
          best_m = trial_m;
        }
      }
    }
    if (best_T.indices.empty()) break;
    for (const int i : T.indices) selected[static_cast<std::size_t>(i)] = 0;
    for (const int i : best_T.indices) selected[static_cast<std::size_t>(i)] = 1;
    T = std::move(best_T);
    m = std::move(best_m);
    objective = best_obj;
  }
}

}  // namespace

Selection round_weights(const WeightVector& w, const DataMatrix& X, const Eigen::VectorXd& m) {
  detail::require(w.size() == X.n(), "dimension mismatch");
  detail::require(m.size() == X.p(), "dimension mismatch");
  const auto dist = l1_distances(X, m);
  std::vector<int> order(static_cast<std::size_t>(X.n()));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (w[a] != w[b]) return w[a] > w[b];
    const double da = dist[static_cast<std::size_t>(a)];
    const double db = dist[static_cast<std::size_t>(b)];
    if (da != db) return da < db;
    return a < b;
  });
  Selection T;
  T.indices.assign(order.begin(), order.begin() + w.h());
  std::sort(T.indices.begin(), T.indices.end());
  return T;
}

EstimationResult estimate_ltad(const DataMatrix& X, int h, const DriverConfig& cfg) {
  const int n = X.n();
  const int p = X.p();
  detail::require(h >= 1 && h <= n, "invalid coverage");
  detail::require(cfg.m_tolerance > 0 && cfg.max_outer_iterations >= 1, "invalid driver config");

  // Optional robust scaling. Columns with zero spread stay unscaled.
  Eigen::VectorXd scale = Eigen::VectorXd::Ones(p);
  if (cfg.standardize) {
    for (int j = 0; j < p; ++j) {
      const Eigen::VectorXd col = X.col(j);
      const double med = coordinate_median(col);
      const double mad = coordinate_median((col.array() - med).abs().matrix());
      if (mad > 0.0) scale[j] = mad;
    }
  }
  Eigen::MatrixXd work = X.values().array().rowwise() / scale.transpose().array();

  Eigen::VectorXd cumulative = Eigen::VectorXd::Zero(p);

  auto finalize = [&](const SolveResult& sol, int outer, bool converged) {
    const Eigen::VectorXd shift_estimate = ((cumulative + sol.m).array() * scale.array()).matrix();
    const Selection T = round_weights(sol.w, X, shift_estimate);
    const Eigen::VectorXd refit_estimate = median_of_rows(X, T);
    const Eigen::VectorXd& reported = cfg.refit_median ? refit_estimate : shift_estimate;

    EstimationResult out{
        LocationEstimate{reported, (cumulative.array() * scale.array()).matrix(),
                         cfg.refit_median, ltad_objective(X, T, reported)},
        T,
        sol.w,
        sol.w.integrality_gap(),
        outer,
        converged,
        shift_estimate,
        refit_estimate,
        sol.m,
        cfg.m_tolerance};
    return out;
  };

  // The chain targets the penalized relaxation, whose optimal subset can
  // differ from the trimmed one. When a refit is requested, every rounded
  // subset seen along the chain seeds a concentration descent on the trimmed
  // objective and the best refit wins; the shift estimate and the weight
  // certificate always describe the chain itself.
  auto polish = [&](EstimationResult r, const std::vector<Selection>& pool) {
    if (!cfg.refit_median) return r;
    Selection best_T = r.selection;
    Eigen::VectorXd best_m = r.m_refit;
    double best_obj = ltad_objective(X, best_T, best_m);
    for (const Selection& start : pool) {
      ConcentrationRun run = concentration_steps(X, h, start, 100);
      exchange_descent(X, h, run.selection, run.m, run.objective);
      if (run.objective < best_obj) {
        best_obj = run.objective;
        best_T = std::move(run.selection);
        best_m = std::move(run.m);
      }
    }
    r.selection = std::move(best_T);
    r.m_refit = best_m;
    r.estimate.m = std::move(best_m);
    r.estimate.objective = best_obj;
    return r;
  };

  std::optional<EstimationResult> best;
  std::optional<WeightVector> carry;
  std::vector<Selection> pool;

  for (int outer = 1; outer <= cfg.max_outer_iterations; ++outer) {
    const DataMatrix working(work);
    const SolveResult sol =
        solve_lp_relaxation(working, h, cfg.solver, carry ? &*carry : nullptr);
    carry = sol.w;

    if (sol.m.norm() < cfg.m_tolerance) {
      EstimationResult terminal = finalize(sol, outer, true);
      pool.push_back(terminal.selection);
      return polish(std::move(terminal), pool);
    }

    EstimationResult candidate = finalize(sol, outer, false);
    pool.push_back(candidate.selection);
    if (!best || candidate.estimate.objective < best->estimate.objective)
      best = std::move(candidate);

    work.rowwise() -= sol.m.transpose();
    cumulative += sol.m;
  }
  return polish(*best, pool);
}

bool certifies_integral_optimum(const EstimationResult& result, double tol) {
  return result.integrality_gap <= tol && result.m_residual.norm() <= result.m_tolerance;
}

ConcentrationRun concentration_steps(const DataMatrix& X, int h, const Selection& start,
                                     int max_steps) {
  start.validate(X.n(), h);
  detail::require(max_steps >= 0, "invalid step count");

  ConcentrationRun run;
  run.selection = start;
  run.m = median_of_rows(X, run.selection);
  run.objective = ltad_objective(X, run.selection, run.m);
  run.step_objectives.push_back(run.objective);

  for (int step = 0; step < max_steps; ++step) {
    Selection next = nearest_rows(X, run.m, h);
    if (next.indices == run.selection.indices) {
      run.stabilized = true;
      break;
    }
    run.selection = std::move(next);
    run.m = median_of_rows(X, run.selection);
    run.objective = ltad_objective(X, run.selection, run.m);
    run.step_objectives.push_back(run.objective);
  }
  return run;
}

EstimationResult heuristic_ltad(const DataMatrix& X, int h, int max_steps, int restarts,
                                std::uint64_t seed) {
  const int n = X.n();
  detail::require(h >= 1 && h <= n, "invalid coverage");
  detail::require(restarts >= 1, "invalid restart count");

  std::optional<ConcentrationRun> best;
  for (int r = 0; r < restarts; ++r) {
    // Seeded h-subset start: partial Fisher-Yates over the row indices.
    std::vector<int> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), 0);
    for (int t = 0; t < h; ++t) {
      const auto pick = static_cast<int>(
          rng::bounded(rng::key(seed, 0x5e1ec7, static_cast<std::uint64_t>(r),
                                static_cast<std::uint64_t>(t)),
                       static_cast<std::uint64_t>(n - t)));
      std::swap(pool[static_cast<std::size_t>(t)], pool[static_cast<std::size_t>(t + pick)]);
    }
    Selection start;
    start.indices.assign(pool.begin(), pool.begin() + h);
    std::sort(start.indices.begin(), start.indices.end());

    ConcentrationRun run = concentration_steps(X, h, start, max_steps);
    if (!best || run.objective < best->objective) best = std::move(run);
  }

  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  for (const int i : best->selection.indices) w[i] = 1.0;

  EstimationResult out{
      LocationEstimate{best->m, Eigen::VectorXd::Zero(X.p()), true, best->objective},
      best->selection,
      WeightVector(std::move(w), h),
      0.0,
      static_cast<int>(best->step_objectives.size()) - 1,
      best->stabilized,
      best->m,
      best->m,
      Eigen::VectorXd::Zero(X.p()),
      0.0};
  return out;
}

}  // namespace ltad
