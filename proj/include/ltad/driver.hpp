#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "ltad/solver.hpp"
#include "ltad/types.hpp"

namespace ltad {

struct DriverConfig {
  double m_tolerance = 1e-6;    // stop when ||m*|| drops below this
  int max_outer_iterations = 100;
  SolverConfig solver{};
  bool refit_median = true;     // report the median of the selected rows
  bool standardize = false;     // per-column MAD scaling before the loop
};

struct EstimationResult {
  LocationEstimate estimate;
  Selection selection;
  WeightVector weights;        // final fractional weights, before rounding
  double integrality_gap = 0.0;
  int outer_iterations = 0;
  bool converged = false;
  Eigen::VectorXd m_shift;     // shift-based reading: cumulative shift plus
                               // the last center, original units
  Eigen::VectorXd m_refit;     // refit reading: median of the selected rows
  Eigen::VectorXd m_residual;  // center of the last inner solve, working units
  double m_tolerance = 0.0;    // the threshold the run used
};

// Top h rows of w as a selection. Ties at the cutoff weight go to the row
// with the smaller ||x_i - m||_1, then to the smaller index.
Selection round_weights(const WeightVector& w, const DataMatrix& X, const Eigen::VectorXd& m);

// Iterative recentering around the relaxation: solve for w on the working
// data, stop once the weighted median m* is within m_tolerance of zero,
// otherwise translate the working data by m* and repeat. The translations
// accumulate into the location estimate.
EstimationResult estimate_ltad(const DataMatrix& X, int h, const DriverConfig& cfg = {});

// True iff the final relaxation solution certifies an exact integral optimum:
// integrality gap at most tol and the final residual center within the
// driver's own tolerance of zero.
bool certifies_integral_optimum(const EstimationResult& result, double tol);

// One concentration pass used by the heuristic: from an initial selection,
// alternate "keep the h nearest rows in L1" with "refit the coordinate-wise
// median" until the selection repeats.
struct ConcentrationRun {
  Selection selection;
  Eigen::VectorXd m;
  double objective = 0.0;
  std::vector<double> step_objectives;
  bool stabilized = false;
};

ConcentrationRun concentration_steps(const DataMatrix& X, int h, const Selection& start,
                                     int max_steps);

// Multi-start concentration heuristic: `restarts` seeded random h-subsets,
// best final objective wins (ties to the earlier restart).
EstimationResult heuristic_ltad(const DataMatrix& X, int h, int max_steps, int restarts,
                                std::uint64_t seed);

}  // namespace ltad
