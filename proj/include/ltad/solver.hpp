#pragma once

#include <Eigen/Dense>

#include <vector>

#include "ltad/objectives.hpp"
#include "ltad/types.hpp"

namespace ltad {

enum class StepSchedule { Constant, Diminishing };
enum class ProjectionMode { ExactCappedSimplex, HyperplaneThenClip };
enum class InitMode { AlternatingDual, Uniform };

struct SolverConfig {
  double step_alpha = 1.0;
  StepSchedule step_schedule = StepSchedule::Diminishing;  // alpha / sqrt(k) along the unit subgradient
  double w_tolerance = 1e-6;
  int max_iterations = 5000;
  ProjectionMode projection_mode = ProjectionMode::ExactCappedSimplex;
  InitMode init_mode = InitMode::AlternatingDual;
  double tie_tolerance = 1e-12;
  // Stop early when the best objective has not improved for this many
  // consecutive iterations. The step-norm test rarely fires at a vertex, so
  // without this cutoff every solve would run to max_iterations.
  int stall_iterations = 300;
};

struct SolveTrace {
  int iterations = 0;
  std::vector<double> objective_history;  // f at the start point, then one per evaluation
  double final_step_norm = 0.0;
  bool converged = false;  // true iff the step-norm test fired
};

struct SolveResult {
  WeightVector w;
  Eigen::VectorXd m;  // weighted median at the returned w
  double objective = 0.0;
  SolveTrace trace;
};

// Minimizer of ||w x - m||_1 - delta * w over w in [0, 1] for one row.
// The cost is piecewise linear and convex, so the minimum sits at 0, 1 or a
// breakpoint m_j / x_j inside (0, 1). Ties go to the larger w.
struct RowWeight {
  double w = 0.0;
  double value = 0.0;
};

RowWeight best_row_weight(const Eigen::VectorXd& x, const Eigen::VectorXd& m, double delta,
                          double tie_tolerance = 1e-12);

// Weights minimizing sum_i ||w_i x_i - m||_1 subject to sum(w) = h for a
// fixed center m, found by bisecting the multiplier delta on the monotone
// dual subgradient h - sum_i w_i(delta). The bisection result is repaired to
// exact feasibility with project_capped_simplex.
WeightVector solve_weights_for_center(const DataMatrix& X, const Eigen::VectorXd& m, int h,
                                      double tie_tolerance = 1e-12);

// Alternating warm start: from m = coordinate median, alternate
// w <- solve_weights_for_center and m <- weighted_median_vector for at most
// 50 rounds. Falls back to the uniform h/n vector if that scores better.
WeightVector warm_start(const DataMatrix& X, int h, const SolverConfig& cfg);

// Projected subgradient descent on f(w) over the capped simplex.
// Tracks and returns the best iterate visited. When `initial` is given it
// replaces the configured start (continuation across recentering rounds).
SolveResult solve_lp_relaxation(const DataMatrix& X, int h, const SolverConfig& cfg = {},
                                const WeightVector* initial = nullptr);

}  // namespace ltad
