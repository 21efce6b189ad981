#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace ltad {

// Observation matrix, n rows by p columns. Rows are observations.
// All entries must be finite and both dimensions positive.
class DataMatrix {
 public:
  explicit DataMatrix(Eigen::MatrixXd values);

  int n() const { return static_cast<int>(values_.rows()); }
  int p() const { return static_cast<int>(values_.cols()); }

  const Eigen::MatrixXd& values() const { return values_; }

  Eigen::VectorXd row(int i) const { return values_.row(i).transpose(); }
  Eigen::VectorXd col(int j) const { return values_.col(j); }

 private:
  Eigen::MatrixXd values_;
};

// Fractional observation weights for a coverage target h:
// 0 <= w_i <= 1 and sum(w) == h, both within 1e-9.
class WeightVector {
 public:
  WeightVector() : h_(0) {}  // empty sentinel, no invariants to hold yet
  WeightVector(Eigen::VectorXd w, int h);

  int size() const { return static_cast<int>(w_.size()); }
  int h() const { return h_; }
  const Eigen::VectorXd& values() const { return w_; }
  double operator[](int i) const { return w_[i]; }

  // Distance from the nearest 0/1 vector: sum_i min(w_i, 1 - w_i).
  double integrality_gap() const;

 private:
  Eigen::VectorXd w_;
  int h_;
};

// Sorted set of h distinct 0-based row indices.
struct Selection {
  std::vector<int> indices;

  int size() const { return static_cast<int>(indices.size()); }
  void validate(int n, int h) const;
};

// Location estimate plus the bookkeeping needed to recover how it was formed.
// `m` is the reported location: the refit coordinate-wise median of the
// selected rows when `refit` is true, otherwise the translation-based value
// (cumulative_shift plus the residual center of the last inner solve).
struct LocationEstimate {
  Eigen::VectorXd m;
  Eigen::VectorXd cumulative_shift;
  bool refit = false;
  double objective = 0.0;
};

namespace detail {

inline void require(bool cond, const std::string& message) {
  if (!cond) throw std::invalid_argument(message);
}

}  // namespace detail

}  // namespace ltad
