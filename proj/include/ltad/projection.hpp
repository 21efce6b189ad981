#pragma once

#include <Eigen/Dense>

namespace ltad {

// Euclidean projection onto the hyperplane sum(w) = h:
// w + ((h - sum(w)) / n) * 1.
Eigen::VectorXd project_hyperplane(const Eigen::VectorXd& w, int h);

// Exact Euclidean projection onto {w : sum(w) = h, 0 <= w <= 1}.
// Solves for the multiplier t with sum_i clip(w_i - t, 0, 1) = h, which is
// continuous, piecewise linear and non-increasing in t. Requires 0 <= h <= n.
Eigen::VectorXd project_capped_simplex(const Eigen::VectorXd& w, int h);

// Two-step surrogate: hyperplane projection followed by clipping to [0, 1].
// When the clip is active the result can violate the sum constraint, e.g.
// (2,0,0,0) with h = 2 maps to (1,0,0,0). Kept for fidelity comparisons.
Eigen::VectorXd project_hyperplane_then_clip(const Eigen::VectorXd& w, int h);

}  // namespace ltad
