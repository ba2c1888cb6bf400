#include <doctest.h>

#include <cmath>
#include <random>

#include "algstab/errors.hpp"
#include "algstab/lifter.hpp"
#include "algstab/matcore.hpp"
#include "algstab/normest.hpp"
#include "algstab/rng.hpp"
#include "test_helpers.hpp"

using namespace algstab;
using namespace algstab::test;

namespace {

double exactness_budget(const StabilizationReport& rep, const Polynomial& p) {
  return 1e-10 * std::pow(std::max(1.0, rep.norm_after), p.degree());
}

}  // namespace

TEST_CASE("clamp function shape") {
  Polynomial p = poly_pm1();  // roots -1, 1, gap 2, radius 2/3
  ClampFunction f(p, 1.0);
  CHECK(f(1.0) == doctest::Approx(1.0));
  CHECK(f(1.3) == doctest::Approx(1.0));
  CHECK(f(5.0) == doctest::Approx(1.0));
  CHECK(f(-0.9) == doctest::Approx(-1.0));
  CHECK(f(0.0) == doctest::Approx(0.0));
  // Linear in between, capped by C everywhere.
  CHECK(f(1.0 / 6.0) == doctest::Approx(0.5));
  for (double t = -2.0; t <= 2.0; t += 0.01) CHECK(std::abs(f(t)) <= 1.0);
}

TEST_CASE("stabilize t^2 on the near-nilpotent certificate") {
  const double delta = 1e-3;
  Mat X = m2(delta, 1, 0, -delta);
  REQUIRE(dist(Mat(X * X), Mat(delta * delta * Mat::Identity(2, 2))) <= 1e-15);
  StabilizationReport rep = stabilize(X, poly_t2(), 1.1);
  CHECK(rep.residual_after <= exactness_budget(rep, poly_t2()));
  CHECK(rep.norm_after <= 1.1 * (1 + 1e-9));
  CHECK(rep.distance <= 2.0 * delta);
  CHECK(rep.regime == Regime::AllMultiple);
}

TEST_CASE("stabilize is a fixed point on an exact projection") {
  std::mt19937_64 rng(71);
  Mat U = random_unitary(4, rng);
  CVec d(4);
  d << 1, 1, 0, 0;
  Mat P = U * d.asDiagonal() * U.adjoint();
  StabilizationReport rep = stabilize(P, poly_proj(), 1.0);
  CHECK(rep.distance <= 1e-8);
  CHECK(rep.residual_after <= 1e-10);
}

TEST_CASE("simple-real clamp moves Hermitian eigenvalues onto the roots") {
  Mat X = m2(0.95, 0.01, 0.01, -0.97);
  StabilizationReport rep = stabilize(X, poly_pm1(), 1.0);
  CHECK(rep.residual_after <= exactness_budget(rep, poly_pm1()));
  CHECK(rep.norm_after <= 1.0 + 1e-9);
  CHECK(rep.distance <= 0.06);
  // Output is the symmetry with the same eigenvectors.
  HermitianEig e = herm_eig(rep.output);
  CHECK(e.eigenvalues(0) == doctest::Approx(-1.0));
  CHECK(e.eigenvalues(1) == doctest::Approx(1.0));
}

TEST_CASE("simple-real fixed point on a non-normal exact solution") {
  Mat X = m2(0, 1, 0, 2);  // annihilated by t(t-2), norm sqrt(5)
  Polynomial p({{0.0, 1}, {2.0, 1}});
  StabilizationReport rep = stabilize(X, p, 2.5);
  CHECK(rep.distance <= 1e-10);
  CHECK(rep.residual_after <= exactness_budget(rep, p));
  CHECK(rep.cap_factor == doctest::Approx(1.0));
}

TEST_CASE("single-root simple polynomial clamps to the root") {
  Polynomial p({{0.0, 1}});
  Mat X = 0.05 * m2(0.3, 0.1, -0.2, 0.4);
  StabilizationReport rep = stabilize(X, p, 1.0);
  CHECK(opnorm(rep.output) <= 1e-12);
}

TEST_CASE("multi-corner multiple regime decouples the blocks") {
  std::mt19937_64 rng(83);
  const double eta = 1e-4;
  Mat blocks = Mat::Zero(4, 4);
  blocks(0, 1) = 1.0;                  // J2(0)
  blocks(2, 2) = blocks(3, 3) = 1.0;   // J2(1)
  blocks(2, 3) = 1.0;
  Mat noise = random_ginibre(4, rng);
  Mat X = blocks + eta / opnorm(noise) * noise;
  Polynomial p = poly_t2_tm1_2();
  StabilizationReport rep = stabilize(X, p, 2.0);
  CHECK(rep.residual_after <= exactness_budget(rep, p));
  CHECK(rep.distance <= 50 * eta);
  // Oracle: stabilizing the exact block matrix is a fixed point.
  StabilizationReport fix = stabilize(blocks, p, 2.0);
  CHECK(fix.distance <= 1e-9);
}

TEST_CASE("a root with no spectrum nearby gets an empty corner") {
  Polynomial p = poly_t2_tm1_2();
  Mat X = m2(0, 1e-3, 0, 0);  // both eigenvalues at 0; the corner at 1 is empty
  StabilizationReport rep = stabilize(X, p, 1.5);
  CHECK(rep.residual_after <= 1e-10);
  CHECK(rep.distance <= 1e-10);
}

TEST_CASE("constant-diagonal input with a multiple root is its own output") {
  Polynomial p({{0.5, 2}});
  Mat X = 0.5 * Mat::Identity(3, 3);
  StabilizationReport rep = stabilize(X, p, 1.0);
  CHECK(rep.distance <= 1e-12);
}

TEST_CASE("norm_cap scales a pure nilpotent leg linearly") {
  Mat Xp = m2(0, 1.2, 0, 0);
  Polynomial p = poly_t2();
  SpectralData sd = spectral_data(Xp, p);
  auto [capped, theta] = norm_cap(Xp, p, sd, 1.0);
  CHECK(theta == doctest::Approx(1.0 / 1.2).epsilon(1e-6));
  CHECK(dist(capped, m2(0, 1, 0, 0)) <= 1e-6);
  CHECK(opnorm(capped) <= 1.0 + 1e-9);
  CHECK(opnorm(capped) >= 1.0 - 1e-6);

  // Within bound: untouched.
  auto [same, one] = norm_cap(m2(0, 0.5, 0, 0), p, spectral_data(m2(0, 0.5, 0, 0), p), 1.0);
  CHECK(one == doctest::Approx(1.0));
  CHECK(dist(same, m2(0, 0.5, 0, 0)) <= 1e-12);
}

TEST_CASE("cap binary search lands on the bound from below") {
  // Semisimple part has norm 1 = 0.9 C; the legs push the norm past C.
  Polynomial p = poly_t2_tm1_2();
  Mat blocks = Mat::Zero(4, 4);
  blocks(0, 1) = 1.15;
  blocks(2, 2) = blocks(3, 3) = 1.0;
  blocks(2, 3) = 0.35;
  const double C = 1.0 / 0.9;
  REQUIRE(opnorm(eval_poly(p, blocks)) <= 1e-10);
  REQUIRE(opnorm(blocks) > C * (1 + 1e-9));
  SpectralData sd = spectral_data(blocks, p);
  auto [capped, theta] = norm_cap(blocks, p, sd, C);
  CHECK(theta < 1.0);
  CHECK(theta > 0.0);
  CHECK(opnorm(capped) <= C * (1 + 1e-9));
  CHECK(opnorm(capped) >= C * (1 - 1e-9));
  CHECK(opnorm(eval_poly(p, capped)) <= 1e-10);
}

TEST_CASE("cap unreachable when the skeleton violates the bound") {
  Polynomial p({{0.0, 2}, {1.5, 2}});
  Mat blocks = Mat::Zero(4, 4);
  blocks(0, 1) = 0.5;
  blocks(2, 2) = blocks(3, 3) = 1.5;
  blocks(2, 3) = 0.1;
  SpectralData sd = spectral_data(blocks, p);
  CHECK_THROWS_AS(norm_cap(blocks, p, sd, 1.0), CapUnreachable);
}

TEST_CASE("regime and precondition refusals") {
  Mat X = m2(0, 1, 0, 0);
  CHECK_THROWS_AS(stabilize(X, Polynomial({{0.0, 2}, {1.0, 1}}), 1.0),
                  UnsupportedRegime);
  CHECK_THROWS_AS(
      stabilize(X, Polynomial({{Complex(0, 1), 1}, {Complex(0, -1), 1}}), 2.0),
      UnsupportedRegime);
  // Root outside the ball.
  CHECK_THROWS_AS(stabilize(X, Polynomial({{3.0, 1}, {0.0, 1}}), 1.0),
                  UnsatisfiableBound);
  // Input too large.
  CHECK_THROWS_AS(stabilize(Mat(5.0 * Mat::Identity(2, 2)), poly_t2(), 1.0),
                  OutsideBasin);
  // Residual beyond the spectral inclusion threshold.
  Mat H = m2(0.5, 0, 0, -0.5);
  CHECK_THROWS_AS(stabilize(H, poly_pm1(), 1.0), GapTooWide);
}

TEST_CASE("idempotent-case oracle on Hermitian inputs") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 25; ++trial) {
    const int dim = 4 + (trial % 3) * 2;
    Mat U = random_unitary(dim, rng);
    CVec d(dim);
    for (int i = 0; i < dim; ++i) d(i) = (i % 2 == 0) ? 1.0 : 0.0;
    Mat P = U * d.asDiagonal() * U.adjoint();
    Mat noise = random_hermitian(dim, rng);
    Mat X = P + 0.05 / opnorm(noise) * noise;
    X *= std::min(1.0, 1.0 / opnorm(X));
    X = 0.5 * (X + Mat(X.adjoint()));

    StabilizationReport rep = stabilize(X, poly_proj(), 1.0);
    CHECK(dist(rep.output, Mat(rep.output.adjoint())) <= 1e-9);
    CHECK(dist(Mat(rep.output * rep.output), rep.output) <= 1e-9);

    // Oracle: spectral projection of the Hermitian part above 1/2.
    Mat oracle = apply_function(
        0.5 * (X + Mat(X.adjoint())),
        [](double t) { return Complex(t > 0.5 ? 1.0 : 0.0, 0.0); });
    const double oracle_dist = dist(X, oracle);
    CHECK(dist(X, rep.output) <= 2.0 * oracle_dist + 1e-12);
  }
}

TEST_CASE("unitary equivariance of the multiple branch") {
  std::mt19937_64 rng(107);
  Polynomial p = poly_t2();
  Mat X0 = random_staircase_nilpotent(6, 2, rng);
  Mat noise = random_ginibre(6, rng);
  Mat X = X0 + 1e-3 / opnorm(noise) * noise;
  Mat U = random_unitary(6, rng);

  StabilizationReport a = stabilize(X, p, 1.5);
  StabilizationReport b = stabilize(Mat(U * X * U.adjoint()), p, 1.5);
  CHECK(dist(b.output, Mat(U * a.output * U.adjoint())) <= 1e-8);
}

TEST_CASE("distance decays towards exactness along a noise ramp") {
  std::mt19937_64 rng(113);
  Polynomial p = poly_t2();
  Mat X0 = sample_exact_solution(p, 6, 99, 1.0);
  Mat noise = random_ginibre(6, rng);
  noise /= opnorm(noise);
  double last = std::numeric_limits<double>::infinity();
  for (double eta : {1e-2, 1e-4, 1e-6, 0.0}) {
    Mat X = X0 + eta * noise;
    StabilizationReport rep = stabilize(X, p, 1.5 * std::max(1.0, opnorm(X0)));
    CHECK(rep.distance <= last * 1.1 + 1e-14);
    last = rep.distance;
  }
  CHECK(last <= 1e-8 * std::max(1.0, opnorm(X0)));
}
