#include "ltad/univariate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ltad {

namespace {

void check_univariate_args(const std::vector<double>& x, int h) {
  const int n = static_cast<int>(x.size());
  detail::require(n >= 1, "empty input");
  for (const double v : x)
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite entry");
  // Windows below half coverage lose the contiguity guarantee, so they are
  // rejected along with out-of-range values.
  detail::require(h >= (n + 1) / 2 && h <= n, "invalid coverage");
}

// Window objective around the window median: the middle element (odd h)
// contributes nothing, so the sum of |x - m| telescopes to
// (sum of the top floor(h/2) values) - (sum of the bottom floor(h/2)).
std::vector<WindowSolution> windows_over_sorted(const std::vector<double>& sorted, int h) {
  const int n = static_cast<int>(sorted.size());
  std::vector<double> prefix(static_cast<std::size_t>(n) + 1, 0.0);
  for (int i = 0; i < n; ++i) prefix[static_cast<std::size_t>(i) + 1] = prefix[static_cast<std::size_t>(i)] + sorted[static_cast<std::size_t>(i)];

  const int half = h / 2;
  std::vector<WindowSolution> out;
  out.reserve(static_cast<std::size_t>(n - h + 1));
  for (int s = 0; s + h <= n; ++s) {
    WindowSolution ws;
    ws.start_rank = s;
    ws.m = (h % 2 == 1) ? sorted[static_cast<std::size_t>(s + h / 2)]
                        : 0.5 * (sorted[static_cast<std::size_t>(s + h / 2 - 1)] +
                                 sorted[static_cast<std::size_t>(s + h / 2)]);
    const double sum_low = prefix[static_cast<std::size_t>(s + half)] - prefix[static_cast<std::size_t>(s)];
    const double sum_high = prefix[static_cast<std::size_t>(s + h)] - prefix[static_cast<std::size_t>(s + h - half)];
    ws.objective = sum_high - sum_low;
    out.push_back(ws);
  }
  return out;
}

}  // namespace

std::vector<WindowSolution> enumerate_windows(const std::vector<double>& x, int h) {
  check_univariate_args(x, h);
  std::vector<double> sorted = x;
  std::sort(sorted.begin(), sorted.end());
  return windows_over_sorted(sorted, h);
}

UnivariateSolution solve_univariate(const std::vector<double>& x, int h) {
  check_univariate_args(x, h);
  const int n = static_cast<int>(x.size());

  // Sort values together with their original indices; equal values keep
  // index order so the selection is deterministic.
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (x[static_cast<std::size_t>(a)] != x[static_cast<std::size_t>(b)])
      return x[static_cast<std::size_t>(a)] < x[static_cast<std::size_t>(b)];
    return a < b;
  });
  std::vector<double> sorted(static_cast<std::size_t>(n));
  for (int r = 0; r < n; ++r) sorted[static_cast<std::size_t>(r)] = x[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])];

  const auto windows = windows_over_sorted(sorted, h);
  const WindowSolution* best = &windows.front();
  for (const auto& ws : windows)
    if (ws.objective < best->objective) best = &ws;

  UnivariateSolution sol;
  sol.best = *best;
  sol.selection.indices.assign(order.begin() + best->start_rank,
                               order.begin() + best->start_rank + h);
  std::sort(sol.selection.indices.begin(), sol.selection.indices.end());
  return sol;
}

}  // namespace ltad
