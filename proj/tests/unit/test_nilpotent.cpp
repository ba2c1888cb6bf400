#include <doctest.h>

#include <cmath>
#include <random>

#include "algstab/errors.hpp"
#include "algstab/matcore.hpp"
#include "algstab/nilpotent.hpp"
#include "algstab/rng.hpp"
#include "test_helpers.hpp"

using namespace algstab;
using namespace algstab::test;

TEST_CASE("chain of the 2x2 shift") {
  Mat N = m2(0, 1, 0, 0);
  NilChain chain = build_chain(N, 2);
  // The flag at level 1 is the kernel complement of N: span(e2).
  CHECK(dist(chain.E(1), m2(0, 0, 0, 1)) <= 1e-14);
  CHECK(chain.ranks[0] == 1);

  Mat Np = truncate_to_nilpotent(N, 2, chain);
  CHECK(dist(Np, N) <= 1e-14);  // exact nilpotents are fixed points
}

TEST_CASE("chain of the zero matrix is trivial") {
  Mat N = Mat::Zero(3, 3);
  NilChain chain = build_chain(N, 2);
  CHECK(opnorm(chain.E(1)) <= 1e-15);
  CHECK(opnorm(truncate_to_nilpotent(N, 2, chain)) <= 1e-15);
}

TEST_CASE("chain of the 3x3 strict upper all-ones") {
  Mat N(3, 3);
  N << 0, 1, 1, 0, 0, 1, 0, 0, 0;
  NilChain chain = build_chain(N, 3);
  // Kernel complements: ker N = span(e1), ker N^2 = span(e1, e2).
  Mat E1 = Mat::Zero(3, 3);
  E1(1, 1) = 1;
  E1(2, 2) = 1;
  Mat E2 = Mat::Zero(3, 3);
  E2(2, 2) = 1;
  CHECK(dist(chain.E(1), E1) <= 1e-12);
  CHECK(dist(chain.E(2), E2) <= 1e-12);

  // Chain domination and the fixed point.
  CHECK(dist(Mat(chain.E(1) * chain.E(2)), chain.E(2)) <= 1e-13);
  Mat Np = truncate_to_nilpotent(N, 3, chain);
  CHECK(dist(Np, N) <= 1e-12);
  CHECK(opnorm(Mat(Np * Np * Np)) <= 1e-13);
}

TEST_CASE("epsilon family: distance is exactly the perturbation") {
  for (double eps : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
    Mat X = m2(0, 1, eps, 0);
    NilChain chain = build_chain(X, 2);
    Mat Np = truncate_to_nilpotent(X, 2, chain);
    CHECK(dist(Np, m2(0, 1, 0, 0)) <= 1e-12);
    CHECK(std::abs(dist(X, Np) - eps) <= 1e-12);
    CHECK(opnorm(Mat(Np * Np)) <= 1e-13);
    CHECK(opnorm(Np) <= opnorm(X) * (1 + 1e-9));
  }
}

TEST_CASE("exact annihilation and norm control on random perturbed inputs") {
  std::mt19937_64 rng(57);
  std::uniform_real_distribution<double> eta_pick(0, 1);
  int built = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int k = 2 + trial % 3;
    const int dim = 4 + 2 * (trial % 4);
    const double eta = std::pow(10.0, -6.0 + 5.0 * eta_pick(rng));
    Mat X0 = random_staircase_nilpotent(dim, k, rng);
    Mat U = random_unitary(dim, rng);
    X0 = U * X0 * U.adjoint();
    Mat noise = random_ginibre(dim, rng);
    Mat X = X0 + eta / opnorm(noise) * noise;

    NilChain chain;
    try {
      chain = build_chain(X, k);
    } catch (const ChainGapFailure&) {
      continue;  // legitimately refused
    }
    ++built;
    Mat Np = truncate_to_nilpotent(X, k, chain);
    const double nx = opnorm(X);
    Mat power = Np;
    for (int j = 1; j < k; ++j) power = power * Np;
    CHECK(opnorm(power) <= 1e-11 * std::pow(nx, k));
    CHECK(opnorm(Np) <= nx * (1 + 1e-9));
    CHECK(dist(X, Np) <= 20.0 * eta + 1e-12);
  }
  CHECK(built >= 50);  // refusals must stay rare at these noise levels
}

TEST_CASE("distance shrinks with the perturbation") {
  std::mt19937_64 rng(61);
  Mat X0 = random_staircase_nilpotent(8, 2, rng);
  Mat U = random_unitary(8, rng);
  X0 = U * X0 * U.adjoint();
  Mat noise = random_ginibre(8, rng);
  noise /= opnorm(noise);
  double last = std::numeric_limits<double>::infinity();
  for (double eta : {1e-2, 1e-4, 1e-6}) {
    Mat X = X0 + eta * noise;
    NilChain chain = build_chain(X, 2);
    const double d = dist(X, truncate_to_nilpotent(X, 2, chain));
    CHECK(d <= last * 1.1);
    last = d;
  }
  CHECK(last <= 1e-5);
}

TEST_CASE("ambiguous threshold cut fails loudly") {
  // Singular values 1, 0.6, 0.45 with an explicit cut at 0.5: the 0.6/0.45
  // pair straddles the cut with ratio 4/3.
  Mat N = Mat::Zero(6, 6);
  N(0, 3) = 1.0;
  N(1, 4) = 0.6;
  N(2, 5) = 0.45;
  ChainOptions opts;
  opts.tau = 0.5;
  CHECK_THROWS_AS(build_chain(N, 2, opts), ChainGapFailure);
  try {
    build_chain(N, 2, opts);
  } catch (const ChainGapFailure& e) {
    CHECK(e.power == 1);
    CHECK(e.gap_ratio == doctest::Approx(0.6 / 0.45));
  }
}

TEST_CASE("nilpotency_order") {
  CHECK(nilpotency_order(m2(0, 1, 0, 0), 1e-12) == 2);
  CHECK(nilpotency_order(Mat(Mat::Identity(4, 4)), 1e-12) == 5);
  Mat J3 = Mat::Zero(3, 3);
  J3(0, 1) = 1;
  J3(1, 2) = 1;
  CHECK(nilpotency_order(J3, 1e-12) == 3);
  CHECK(nilpotency_order(Mat(Mat::Zero(2, 2)), 1e-12) == 1);
}

TEST_CASE("order cap and chain validation") {
  CHECK_THROWS_AS(build_chain(m2(0, 1, 0, 0), 1), ValidationError);
  NilChain chain = build_chain(m2(0, 1, 0, 0), 2);
  CHECK_THROWS_AS(truncate_to_nilpotent(Mat(Mat::Zero(3, 3)), 2, chain),
                  DimensionMismatch);
  CHECK_THROWS_AS(truncate_to_nilpotent(m2(0, 1, 0, 0), 3, chain),
                  ValidationError);
}
