#pragma once

#include <vector>

#include "algstab/types.hpp"

namespace algstab {

// Projection chain for order-k truncation. The flags are the approximate
// kernel complements of the powers of N (spans of right singular vectors
// above the threshold cut), stored through a single orthonormal basis so the
// nesting ran(E_{k-1}) <= ... <= ran(E_1) holds to machine precision. D_j is
// collapsed onto E_j; the slack between them has no finite-dimensional role.
struct NilChain {
  int order = 2;
  std::vector<Mat> flags;          // E_1 .. E_{k-1}; E_0 = I implicit
  std::vector<int> ranks;          // rank of E_j
  std::vector<double> cuts;        // threshold used at power j
  std::vector<double> gap_ratios;  // singular-value gap across each cut
  double tau = 0.0;                // threshold actually used

  const Mat& E(int j) const { return flags[static_cast<std::size_t>(j - 1)]; }
};

struct ChainOptions {
  double tau = 0.0;       // <= 0 selects ||N^k||^{1/k}/||N|| * 10, clamped
  double tau_min = 1e-8;
  double tau_max = 0.3;
  double gap_min = 2.0;   // minimal acceptable gap across the cut
};

// Builds the chain for N at order k. Throws ChainGapFailure when singular
// values of some power cluster at the cut and the flag is ill-determined.
NilChain build_chain(const Mat& N, int k, const ChainOptions& opts = {});

// N' = sum_j (E_{j-1} - E_j) X D_j, then scaled by min(1, ||X||/||N'||).
// (N')^k = 0 to machine precision by the flag descent; the scaling keeps
// ||N'|| <= ||X|| without touching exactness.
Mat truncate_to_nilpotent(const Mat& X, int k, const NilChain& chain);

// Least k with ||X^k|| <= tol * ||X||^k, capped at dim + 1.
int nilpotency_order(const Mat& X, double tol);

}  // namespace algstab
