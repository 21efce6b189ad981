#pragma once

#include <vector>

#include "ltad/types.hpp"

namespace ltad {

// One contiguous window of h order statistics: its start rank (0-based
// position in the sorted sample), the window median and the window objective
// sum |x - m|.
struct WindowSolution {
  int start_rank = 0;
  double m = 0.0;
  double objective = 0.0;
};

// All n - h + 1 contiguous windows of length h over the sorted sample,
// in start-rank order. Requires ceil(n/2) <= h <= n.
std::vector<WindowSolution> enumerate_windows(const std::vector<double>& x, int h);

// Exact univariate solution: the best window, ties broken by the smallest
// start rank. Returns the window plus the original indices it selects.
struct UnivariateSolution {
  WindowSolution best;
  Selection selection;
};

UnivariateSolution solve_univariate(const std::vector<double>& x, int h);

}  // namespace ltad
