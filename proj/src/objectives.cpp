#include "ltad/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace ltad {

namespace detail {

double median_inplace(std::vector<double>& buf) {
  const std::size_t n = buf.size();
  const std::size_t mid = n / 2;
  std::nth_element(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(mid), buf.end());
  const double upper = buf[mid];
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

void relaxed_eval(const Eigen::MatrixXd& X, const Eigen::VectorXd& w,
                  Eigen::VectorXd* m_out, double* f_out, Eigen::VectorXd* g_out) {
  const int n = static_cast<int>(X.rows());
  const int p = static_cast<int>(X.cols());
  if (m_out) m_out->resize(p);
  if (f_out) *f_out = 0.0;
  if (g_out) g_out->setZero(n);

  std::vector<double> buf(static_cast<std::size_t>(n));
  for (int j = 0; j < p; ++j) {
    const double* col = X.col(j).data();
    for (int i = 0; i < n; ++i) buf[static_cast<std::size_t>(i)] = w[i] * col[i];
    const double mj = median_inplace(buf);
    if (m_out) (*m_out)[j] = mj;
    if (!f_out && !g_out) continue;
    for (int i = 0; i < n; ++i) {
      const double r = w[i] * col[i] - mj;
      if (f_out) *f_out += std::abs(r);
      if (g_out) {
        if (r > 0.0)
          (*g_out)[i] += col[i];
        else if (r < 0.0)
          (*g_out)[i] -= col[i];
      }
    }
  }
}

}  // namespace detail

double coordinate_median(const Eigen::VectorXd& v) {
  if (v.size() == 0) throw std::invalid_argument("empty input");
  std::vector<double> buf(v.data(), v.data() + v.size());
  return detail::median_inplace(buf);
}

Eigen::VectorXd coordinate_median(const DataMatrix& X) {
  Eigen::VectorXd m(X.p());
  std::vector<double> buf(static_cast<std::size_t>(X.n()));
  for (int j = 0; j < X.p(); ++j) {
    const auto col = X.values().col(j);
    std::copy(col.data(), col.data() + X.n(), buf.begin());
    m[j] = detail::median_inplace(buf);
  }
  return m;
}

Eigen::VectorXd weighted_median_vector(const DataMatrix& X, const WeightVector& w) {
  detail::require(w.size() == X.n(), "dimension mismatch");
  Eigen::VectorXd m;
  detail::relaxed_eval(X.values(), w.values(), &m, nullptr, nullptr);
  return m;
}

double ltad_objective(const DataMatrix& X, const Selection& T, const Eigen::VectorXd& m) {
  detail::require(m.size() == X.p(), "dimension mismatch");
  T.validate(X.n(), T.size());
  double obj = 0.0;
  for (const int i : T.indices) obj += (X.values().row(i).transpose() - m).lpNorm<1>();
  return obj;
}

double penalized_objective(const DataMatrix& X, const Selection& T, const Eigen::VectorXd& m,
                           int n, int h) {
  detail::require(n == X.n(), "dimension mismatch");
  detail::require(h == T.size(), "selection size mismatch");
  detail::require(m.size() == X.p(), "dimension mismatch");
  T.validate(n, h);
  // Literal all-rows sum of ||w_i x_i - m||_1 for 0/1 weights: rows outside T
  // contribute ||m||_1 each.
  double obj = 0.0;
  std::vector<char> in_T(static_cast<std::size_t>(n), 0);
  for (const int i : T.indices) in_T[static_cast<std::size_t>(i)] = 1;
  const double m_norm = m.lpNorm<1>();
  for (int i = 0; i < n; ++i) {
    if (in_T[static_cast<std::size_t>(i)])
      obj += (X.values().row(i).transpose() - m).lpNorm<1>();
    else
      obj += m_norm;
  }
  return obj;
}

double relaxed_objective(const DataMatrix& X, const WeightVector& w) {
  detail::require(w.size() == X.n(), "dimension mismatch");
  double f = 0.0;
  detail::relaxed_eval(X.values(), w.values(), nullptr, &f, nullptr);
  return f;
}

Eigen::VectorXd relaxed_subgradient(const DataMatrix& X, const WeightVector& w) {
  detail::require(w.size() == X.n(), "dimension mismatch");
  Eigen::VectorXd g;
  detail::relaxed_eval(X.values(), w.values(), nullptr, nullptr, &g);
  return g;
}

}  // namespace ltad
