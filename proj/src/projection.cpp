#include "ltad/projection.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace ltad {

Eigen::VectorXd project_hyperplane(const Eigen::VectorXd& w, int h) {
  if (w.size() == 0) throw std::invalid_argument("empty input");
  const double shift = (static_cast<double>(h) - w.sum()) / static_cast<double>(w.size());
  return w.array() + shift;
}

Eigen::VectorXd project_capped_simplex(const Eigen::VectorXd& w, int h) {
  const int n = static_cast<int>(w.size());
  if (n == 0) throw std::invalid_argument("empty input");
  if (h > n || h < 0) throw std::invalid_argument("infeasible coverage");

  // sum_i clip(w_i - t, 0, 1) is continuous, piecewise linear and
  // non-increasing in t, with kinks only at w_i and w_i - 1. Bracket the
  // target level h between adjacent kinks, then interpolate on the linear
  // segment.
  auto level = [&](double t) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += std::clamp(w[i] - t, 0.0, 1.0);
    return s;
  };

  std::vector<double> kinks;
  kinks.reserve(2 * static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    kinks.push_back(w[i]);
    kinks.push_back(w[i] - 1.0);
  }
  std::sort(kinks.begin(), kinks.end());

  // level(kinks.front()) == n and level(kinks.back()) == 0.
  int lo = 0;
  int hi = static_cast<int>(kinks.size()) - 1;
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    if (level(kinks[static_cast<std::size_t>(mid)]) >= static_cast<double>(h))
      lo = mid;
    else
      hi = mid;
  }

  const double s_lo = level(kinks[static_cast<std::size_t>(lo)]);
  const double s_hi = level(kinks[static_cast<std::size_t>(hi)]);
  double t;
  if (s_lo <= s_hi) {
    t = kinks[static_cast<std::size_t>(lo)];
  } else {
    const double frac = (s_lo - static_cast<double>(h)) / (s_lo - s_hi);
    t = kinks[static_cast<std::size_t>(lo)] +
        frac * (kinks[static_cast<std::size_t>(hi)] - kinks[static_cast<std::size_t>(lo)]);
  }

  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) out[i] = std::clamp(w[i] - t, 0.0, 1.0);

  // Interpolation on large-magnitude inputs can leave a rounding residual in
  // the sum; spread it across the non-saturated coordinates.
  for (int pass = 0; pass < 2; ++pass) {
    const double resid = static_cast<double>(h) - out.sum();
    if (resid == 0.0) break;
    int interior = 0;
    for (int i = 0; i < n; ++i)
      if (out[i] > 0.0 && out[i] < 1.0) ++interior;
    if (interior == 0) break;
    const double bump = resid / interior;
    for (int i = 0; i < n; ++i)
      if (out[i] > 0.0 && out[i] < 1.0) out[i] = std::clamp(out[i] + bump, 0.0, 1.0);
  }
  return out;
}

Eigen::VectorXd project_hyperplane_then_clip(const Eigen::VectorXd& w, int h) {
  Eigen::VectorXd out = project_hyperplane(w, h);
  for (int i = 0; i < out.size(); ++i) out[i] = std::clamp(out[i], 0.0, 1.0);
  return out;
}

}  // namespace ltad
