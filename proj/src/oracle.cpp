#include "ltad/oracle.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include "ltad/objectives.hpp"

namespace ltad {

namespace {

constexpr std::uint64_t kSubsetCap = 2'000'000;

// Advance idx to the next h-combination of {0..n-1} in lexicographic order.
// Returns false when idx was the last combination.
bool next_combination(std::vector<int>& idx, int n) {
  const int h = static_cast<int>(idx.size());
  int k = h - 1;
  while (k >= 0 && idx[static_cast<std::size_t>(k)] == n - h + k) --k;
  if (k < 0) return false;
  ++idx[static_cast<std::size_t>(k)];
  for (int t = k + 1; t < h; ++t)
    idx[static_cast<std::size_t>(t)] = idx[static_cast<std::size_t>(t - 1)] + 1;
  return true;
}

OracleResult enumerate_subsets(const DataMatrix& X, int h, OracleModel model) {
  const int n = X.n();
  const int p = X.p();
  detail::require(h >= 1 && h <= n, "invalid coverage");
  if (subset_count(n, h, kSubsetCap) > kSubsetCap) throw SizeGuardError();

  const int pad = model == OracleModel::Penalized ? n - h : 0;
  std::vector<int> idx(static_cast<std::size_t>(h));
  std::iota(idx.begin(), idx.end(), 0);

  OracleResult best;
  best.model = model;
  best.objective = std::numeric_limits<double>::infinity();

  std::vector<double> buf;
  buf.reserve(static_cast<std::size_t>(h + pad));
  Eigen::VectorXd m(p);

  do {
    for (int j = 0; j < p; ++j) {
      buf.assign(static_cast<std::size_t>(pad), 0.0);
      for (const int i : idx) buf.push_back(X.values()(i, j));
      m[j] = detail::median_inplace(buf);
    }
    double obj = 0.0;
    for (const int i : idx) obj += (X.values().row(i).transpose() - m).lpNorm<1>();
    if (pad > 0) obj += pad * m.lpNorm<1>();

    if (obj < best.objective) {
      best.objective = obj;
      best.m = m;
      best.selection.indices = idx;
    }
  } while (next_combination(idx, n));

  return best;
}

}  // namespace

std::uint64_t subset_count(int n, int h, std::uint64_t cap) {
  detail::require(n >= 0 && h >= 0 && h <= n, "invalid coverage");
  h = std::min(h, n - h);
  __uint128_t c = 1;
  for (int i = 1; i <= h; ++i) {
    c = c * static_cast<unsigned>(n - h + i) / static_cast<unsigned>(i);
    if (c > cap) return cap + 1;
  }
  return static_cast<std::uint64_t>(c);
}

OracleResult solve_exact_trimmed(const DataMatrix& X, int h) {
  return enumerate_subsets(X, h, OracleModel::Trimmed);
}

OracleResult solve_exact_penalized(const DataMatrix& X, int h) {
  return enumerate_subsets(X, h, OracleModel::Penalized);
}

}  // namespace ltad
