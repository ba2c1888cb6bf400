#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "algstab/poly.hpp"
#include "algstab/types.hpp"

namespace algstab {

enum class Letter { X, XAdj };

using Word = std::vector<Letter>;  // empty word = identity

struct NCTerm {
  Complex coeff{1.0, 0.0};
  Word word;
};

// Polynomial in the noncommuting pair (x, x*).
struct NCPoly {
  std::vector<NCTerm> terms;

  // Grammar: terms joined by + or -, each term an optional real coefficient
  // (optionally followed by '*') and a product of letters 'x' / 'x*', e.g.
  // "x + x*", "2 x x* - 0.5", "x*x". A bare coefficient is the identity.
  static NCPoly parse(std::string_view text);

  // Triangle-inequality bound sum |coeff| valid for any contraction.
  double coeff_bound() const;

  std::string to_string() const;
};

Mat eval_ncpoly(const NCPoly& q, const Mat& X);

// Exact finite-dimensional representation of p(x) = 0, ||x|| <= 1: a random
// orthogonal resolution of identity carries the roots, corners with
// multiplicity >= 2 get random staircase nilpotent legs, an optional mild
// similarity obliques the picture, and the legs are contracted until the
// norm clears 1. Exactness and the norm bound are verified on construction.
struct RepSample {
  Mat X;
  int dim = 0;
  std::uint64_t seed = 0;
  double relation_residual = 0.0;
  double norm = 0.0;
  double theta = 1.0;  // final leg contraction
};

RepSample sample_representation(const Polynomial& p, int dim, std::uint64_t seed,
                                double cond_cap = 10.0);

// Exact solution scaled for a general bound C; building block shared with
// the sweep drivers. Norm is whatever the construction produces (<= C when
// cap_to_one).
Mat sample_exact_solution(const Polynomial& p, int dim, std::uint64_t seed,
                          double cond_cap = 3.0);

struct DimEstimate {
  int dim = 0;
  int trials = 0;
  double best = 0.0;
  std::uint64_t argmax_seed = 0;
};

struct NormEstimate {
  double lower_bound = 0.0;
  std::vector<DimEstimate> per_dim;
};

// Lower bound for the universal norm of q(x, x*) under p(x) = 0, ||x|| <= 1
// by maximizing over sampled representations. Reproducible from the seed;
// adding dims or trials never decreases the bound.
NormEstimate estimate_norm(const NCPoly& q, const Polynomial& p,
                           const std::vector<int>& dims, int trials,
                           std::uint64_t seed, int jobs = 1,
                           double cond_cap = 10.0);

}  // namespace algstab
