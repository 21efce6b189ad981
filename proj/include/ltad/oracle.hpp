#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>

#include "ltad/types.hpp"

namespace ltad {

// Thrown when an instance exceeds the enumeration budget.
class SizeGuardError : public std::runtime_error {
 public:
  SizeGuardError() : std::runtime_error("oracle size guard") {}
};

enum class OracleModel { Trimmed, Penalized };

struct OracleResult {
  Selection selection;
  Eigen::VectorXd m;
  double objective = 0.0;
  OracleModel model = OracleModel::Trimmed;
};

// Number of h-subsets of n items, saturating at cap + 1 to avoid overflow.
std::uint64_t subset_count(int n, int h, std::uint64_t cap);

// Exact minimizer of the trimmed objective by enumerating all C(n, h)
// subsets; the optimal center for a fixed subset is its coordinate-wise
// median. Objective ties keep the lexicographically smallest index set.
// Rejects instances with C(n, h) > 2e6.
OracleResult solve_exact_trimmed(const DataMatrix& X, int h);

// Exact minimizer of the penalized objective. For a fixed subset the optimal
// center is the coordinate-wise median of the h selected values padded with
// n - h zeros.
OracleResult solve_exact_penalized(const DataMatrix& X, int h);

}  // namespace ltad
