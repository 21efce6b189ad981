#include "ltad/types.hpp"

#include <algorithm>
#include <cmath>

namespace ltad {

DataMatrix::DataMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
  detail::require(values_.rows() >= 1 && values_.cols() >= 1, "empty input");
  if (!values_.allFinite()) throw std::invalid_argument("non-finite entry in data matrix");
}

WeightVector::WeightVector(Eigen::VectorXd w, int h) : w_(std::move(w)), h_(h) {
  const int n = static_cast<int>(w_.size());
  detail::require(n >= 1, "empty input");
  detail::require(h_ >= 0 && h_ <= n, "invalid coverage");
  constexpr double tol = 1e-9;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = w_[i];
    if (!std::isfinite(v) || v < -tol || v > 1.0 + tol)
      throw std::invalid_argument("weight out of [0, 1]");
    sum += v;
  }
  if (std::abs(sum - h_) > tol) throw std::invalid_argument("weights do not sum to coverage");
}

double WeightVector::integrality_gap() const {
  double gap = 0.0;
  for (int i = 0; i < w_.size(); ++i) gap += std::min(w_[i], 1.0 - w_[i]);
  return gap;
}

void Selection::validate(int n, int h) const {
  detail::require(static_cast<int>(indices.size()) == h, "selection size mismatch");
  int prev = -1;
  for (const int i : indices) {
    detail::require(i > prev, "selection indices not strictly increasing");
    detail::require(i >= 0 && i < n, "selection index out of range");
    prev = i;
  }
}

}  // namespace ltad
