#pragma once

#include <cstdint>
#include <random>

#include "algstab/types.hpp"

namespace algstab {

// splitmix64 step; used to derive independent per-trial seeds so that
// parallel sweeps are reproducible regardless of scheduling.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t split_seed(std::uint64_t master, std::uint64_t stream) {
  return mix64(master ^ mix64(stream + 0x9e3779b97f4a7c15ULL));
}

inline std::uint64_t split_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  return split_seed(split_seed(master, a), b);
}

Mat random_ginibre(Eigen::Index dim, std::mt19937_64& rng);

// Haar-distributed unitary (QR of a Ginibre matrix with phase fix).
Mat random_unitary(Eigen::Index dim, std::mt19937_64& rng);

Mat random_hermitian(Eigen::Index dim, std::mt19937_64& rng);

// Hermitian positive definite with condition number exactly `cond`.
Mat random_psd_with_cond(Eigen::Index dim, double cond, std::mt19937_64& rng);

// Strictly block-upper-triangular ("staircase") nilpotent of order exactly
// min(order, dim), with singular structure bounded away from zero, conjugated
// by nothing (caller rotates). grades.size() == effective order.
Mat random_staircase_nilpotent(Eigen::Index dim, int order, std::mt19937_64& rng);

}  // namespace algstab
