#pragma once

#include <Eigen/Dense>

#include "ltad/types.hpp"

namespace ltad {

// Median of the entries of v. Even length averages the two middle order
// statistics. Throws on empty input.
double coordinate_median(const Eigen::VectorXd& v);

// Coordinate-wise median of the rows of X.
Eigen::VectorXd coordinate_median(const DataMatrix& X);

// Coordinate-wise median of the scaled rows {w_i * x_i}.
Eigen::VectorXd weighted_median_vector(const DataMatrix& X, const WeightVector& w);

// Trimmed objective: sum over the selected rows of ||x_i - m||_1.
double ltad_objective(const DataMatrix& X, const Selection& T, const Eigen::VectorXd& m);

// Penalized objective: sum_{i in T} ||x_i - m||_1 + (n - h) * ||m||_1,
// i.e. the all-rows sum of ||w_i x_i - m||_1 for the 0/1 weights given by T.
double penalized_objective(const DataMatrix& X, const Selection& T, const Eigen::VectorXd& m,
                           int n, int h);

// Relaxation objective f(w) = sum_j sum_i |w_i x_ij - m_j(w)| where m_j(w)
// is the median of the scaled column {w_i x_ij}.
double relaxed_objective(const DataMatrix& X, const WeightVector& w);

// Subgradient of f at w: g_k = sum_j x_kj * sign(w_k x_kj - m_j(w)),
// with sign(0) taken as 0.
Eigen::VectorXd relaxed_subgradient(const DataMatrix& X, const WeightVector& w);

namespace detail {

// Single pass over X computing m(w), f(w) and the subgradient together.
// Any output pointer may be null.
void relaxed_eval(const Eigen::MatrixXd& X, const Eigen::VectorXd& w,
                  Eigen::VectorXd* m_out, double* f_out, Eigen::VectorXd* g_out);

// Median of buf, destroying its order. buf must be non-empty.
double median_inplace(std::vector<double>& buf);

}  // namespace detail

}  // namespace ltad
