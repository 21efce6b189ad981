#include "ltad/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "ltad/projection.hpp"

namespace ltad {

RowWeight best_row_weight(const Eigen::VectorXd& x, const Eigen::VectorXd& m, double delta,
                          double tie_tolerance) {
  detail::require(x.size() == m.size() && x.size() >= 1, "dimension mismatch");

  auto cost = [&](double w) { return (w * x - m).cwiseAbs().sum() - delta * w; };

  std::vector<double> candidates{0.0, 1.0};
  for (int j = 0; j < x.size(); ++j) {
    if (x[j] == 0.0) continue;
    const double b = m[j] / x[j];
    if (b > 0.0 && b < 1.0) candidates.push_back(b);
  }

  double vmin = cost(candidates[0]);
  for (std::size_t c = 1; c < candidates.size(); ++c) vmin = std::min(vmin, cost(candidates[c]));

  RowWeight best{-1.0, vmin};
  for (const double c : candidates)
    if (cost(c) <= vmin + tie_tolerance && c > best.w) best.w = c;
  return best;
}

WeightVector solve_weights_for_center(const DataMatrix& X, const Eigen::VectorXd& m, int h,
                                      double tie_tolerance) {
  const int n = X.n();
  detail::require(m.size() == X.p(), "dimension mismatch");
  detail::require(h >= 1 && h <= n, "invalid coverage");

  const double target = static_cast<double>(h);

  auto weights_at = [&](double delta) {
    Eigen::VectorXd w(n);
    for (int i = 0; i < n; ++i) w[i] = best_row_weight(X.row(i), m, delta, tie_tolerance).w;
    return w;
  };
  auto sum_at = [&](double delta) { return weights_at(delta).sum(); };

  // Per-row cost slopes are bounded by ||x_i||_1, so this bracket already
  // pins w to all-zeros / all-ones at its ends; the widening loop is a
  // safety valve.
  double radius = 0.0;
  for (int i = 0; i < n; ++i) radius = std::max(radius, X.values().row(i).cwiseAbs().sum());
  double lo = -(radius + 1.0);
  double hi = radius + 1.0;

  int widen = 0;
  while (sum_at(lo) > target) {
    if (++widen > 60) throw std::runtime_error("dual bracket not found");
    lo -= (hi - lo);
  }
  widen = 0;
  while (sum_at(hi) < target) {
    if (++widen > 60) throw std::runtime_error("dual bracket not found");
    hi += (hi - lo);
  }

  // The dual subgradient h - sum_i w_i(delta) is monotone, so bisect.
  for (int it = 0; it < 100; ++it) {
    if (hi - lo <= 1e-13 * (1.0 + std::abs(lo) + std::abs(hi))) break;
    const double mid = 0.5 * (lo + hi);
    if (sum_at(mid) >= target)
      hi = mid;
    else
      lo = mid;
  }

  const Eigen::VectorXd w_lo = weights_at(lo);
  const Eigen::VectorXd w_hi = weights_at(hi);
  const Eigen::VectorXd& w_raw =
      std::abs(w_lo.sum() - target) <= std::abs(w_hi.sum() - target) ? w_lo : w_hi;
  return WeightVector(project_capped_simplex(w_raw, h), h);
}

namespace {

WeightVector uniform_weights(int n, int h) {
  return WeightVector(Eigen::VectorXd::Constant(n, static_cast<double>(h) / n), h);
}

}  // namespace

WeightVector warm_start(const DataMatrix& X, int h, const SolverConfig& cfg) {
  const int n = X.n();
  detail::require(h >= 1 && h <= n, "invalid coverage");
  WeightVector w_uniform = uniform_weights(n, h);

  try {
    Eigen::VectorXd m = coordinate_median(X);
    WeightVector w = w_uniform;
    for (int round = 0; round < 50; ++round) {
      WeightVector w_next = solve_weights_for_center(X, m, h, cfg.tie_tolerance);
      const double change = (w_next.values() - w.values()).norm();
      w = std::move(w_next);
      m = weighted_median_vector(X, w);
      if (change < cfg.w_tolerance) break;
    }
    if (relaxed_objective(X, w) <= relaxed_objective(X, w_uniform)) return w;
  } catch (const std::exception&) {
    // fall through to the uniform start
  }
  return w_uniform;
}

SolveResult solve_lp_relaxation(const DataMatrix& X, int h, const SolverConfig& cfg,
                                const WeightVector* initial) {
  const int n = X.n();
  detail::require(h >= 1 && h <= n, "invalid coverage");
  detail::require(cfg.step_alpha > 0 && cfg.w_tolerance > 0 && cfg.max_iterations >= 1,
                  "invalid solver config");
  if (initial) detail::require(initial->size() == n && initial->h() == h, "dimension mismatch");

  Eigen::VectorXd w;
  if (initial)
    w = initial->values();
  else if (cfg.init_mode == InitMode::AlternatingDual)
    w = warm_start(X, h, cfg).values();
  else
    w = uniform_weights(n, h).values();

  SolveTrace trace;
  trace.objective_history.reserve(static_cast<std::size_t>(cfg.max_iterations) + 1);

  Eigen::VectorXd m_cur, g;
  double f_cur = 0.0;
  detail::relaxed_eval(X.values(), w, &m_cur, &f_cur, &g);
  trace.objective_history.push_back(f_cur);

  Eigen::VectorXd best_w = w;
  Eigen::VectorXd best_m = m_cur;
  double best_f = f_cur;
  int stall = 0;

  for (int k = 1; k <= cfg.max_iterations; ++k) {
    const double alpha = cfg.step_schedule == StepSchedule::Diminishing
                             ? cfg.step_alpha / std::sqrt(static_cast<double>(k))
                             : cfg.step_alpha;
    // Step length lives in weight space: alpha scales the unit subgradient,
    // so the trajectory does not depend on the scale of the data.
    const double g_norm = g.norm();
    if (g_norm <= 1e-15) {
      trace.iterations = k;
      trace.final_step_norm = 0.0;
      trace.converged = true;
      break;
    }
    const Eigen::VectorXd target = w - (alpha / g_norm) * g;
    Eigen::VectorXd next = cfg.projection_mode == ProjectionMode::ExactCappedSimplex
                               ? project_capped_simplex(target, h)
                               : project_hyperplane_then_clip(target, h);

    const double step_norm = (next - w).norm();
    w = std::move(next);
    detail::relaxed_eval(X.values(), w, &m_cur, &f_cur, &g);
    trace.objective_history.push_back(f_cur);

    if (f_cur < best_f - (1e-10 + 1e-9 * std::abs(best_f))) {
      best_f = f_cur;
      best_w = w;
      best_m = m_cur;
      stall = 0;
    } else {
      ++stall;
    }

    trace.iterations = k;
    trace.final_step_norm = step_norm;
    if (step_norm < cfg.w_tolerance) {
      trace.converged = true;
      break;
    }
    if (cfg.stall_iterations > 0 && stall >= cfg.stall_iterations) break;
  }

  // The two-step projection can drift off the sum constraint; repair the
  // returned point so it satisfies the weight invariants.
  if (cfg.projection_mode == ProjectionMode::HyperplaneThenClip &&
      std::abs(best_w.sum() - static_cast<double>(h)) > 1e-9) {
    best_w = project_capped_simplex(best_w, h);
    detail::relaxed_eval(X.values(), best_w, &best_m, &best_f, nullptr);
  }

  // Alternating polish: partial minimization over w at the incumbent center.
  // Each accepted round strictly improves f, so the subgradient incumbent is
  // never discarded for a worse point; the alternation typically lands on the
  // vertex the subgradient trajectory only approaches.
  for (int round = 0; round < 25; ++round) {
    Eigen::VectorXd w_try;
    try {
      w_try = solve_weights_for_center(X, best_m, h, cfg.tie_tolerance).values();
    } catch (const std::exception&) {
      break;
    }
    Eigen::VectorXd m_try;
    double f_try = 0.0;
    detail::relaxed_eval(X.values(), w_try, &m_try, &f_try, nullptr);
    trace.objective_history.push_back(f_try);
    if (f_try < best_f - 1e-12 * (1.0 + std::abs(best_f))) {
      best_f = f_try;
      best_w = std::move(w_try);
      best_m = std::move(m_try);
    } else {
      break;
    }
  }

  SolveResult result{WeightVector(best_w, h), std::move(best_m), best_f, std::move(trace)};
  return result;
}

}  // namespace ltad
