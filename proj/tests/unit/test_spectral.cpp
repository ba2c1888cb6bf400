#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "algstab/errors.hpp"
#include "algstab/matcore.hpp"
#include "algstab/spectral.hpp"
#include "test_helpers.hpp"

using namespace algstab;
using namespace algstab::test;

namespace {

// Brute-force idempotents through the eigenvector basis; valid for
// diagonalizable input. e_i = V 1_{cluster i} V^{-1}.
std::vector<Mat> eigenbasis_idempotents(const Mat& X, const Polynomial& p) {
  Eigen::ComplexEigenSolver<Mat> es(X);
  const Mat V = es.eigenvectors();
  const Mat Vinv = V.inverse();
  std::vector<Mat> out(static_cast<std::size_t>(p.num_roots()),
                       Mat::Zero(X.rows(), X.cols()));
  for (Eigen::Index j = 0; j < X.rows(); ++j) {
    int best = 0;
    double dbest = std::abs(es.eigenvalues()(j) - p.roots()[0].root);
    for (int r = 1; r < p.num_roots(); ++r) {
      const double d = std::abs(es.eigenvalues()(j) - p.roots()[static_cast<std::size_t>(r)].root);
      if (d < dbest) {
        best = r;
        dbest = d;
      }
    }
    out[static_cast<std::size_t>(best)] += V.col(j) * Vinv.row(j);
  }
  return out;
}

}  // namespace

TEST_CASE("cluster assignment") {
  Polynomial p({{0.0, 1}, {2.0, 1}});
  Mat X = m2(0.01, 0, 0, 1.99);
  auto a = cluster_eigenvalues(X, p);
  CHECK(a[0] == 0);
  CHECK(a[1] == 1);

  CHECK_THROWS_AS(cluster_eigenvalues(Mat(Mat::Identity(1, 1)), p),
                  ClusterAmbiguous);

  // Single root: assignment is forced, so even distant eigenvalues pass.
  Polynomial t2 = poly_t2();
  Mat far = m2(0, 1, 1, 0);
  auto b = cluster_eigenvalues(far, t2);
  CHECK(b[0] == 0);
  CHECK(b[1] == 0);

  // Perturbed Jordan block stays inside the single cluster.
  Mat J = m2(0, 1, 1e-3, 0);
  auto c = cluster_eigenvalues(J, t2);
  CHECK((c[0] == 0 && c[1] == 0));
}

TEST_CASE("spectral_data worked 2x2 example") {
  Polynomial p({{0.0, 1}, {2.0, 1}});
  Mat X = m2(0, 1, 0, 2);
  SpectralData sd = spectral_data(X, p);

  Mat e1 = m2(1, -0.5, 0, 0);
  Mat e2 = m2(0, 0.5, 0, 1);
  Mat s = m2(1, -0.5, -0.5, 1.5);
  CHECK(dist(sd.idempotents[0], e1) <= 1e-12);
  CHECK(dist(sd.idempotents[1], e2) <= 1e-12);
  CHECK(dist(sd.metric, s) <= 1e-12);

  SpectralResiduals r = spectral_residuals(sd, p);
  CHECK(r.idempotent_sum <= 1e-12);
  CHECK(r.idempotent_cross_max <= 1e-12);
  CHECK(r.projection_defect <= 1e-12);
  CHECK(r.projection_sum <= 1e-12);
  CHECK(r.corner_offdiag <= 1e-12);
  CHECK(r.corner_annihilation <= 1e-12);
}

TEST_CASE("spectral_data on normal exact input") {
  std::mt19937_64 rng(23);
  Mat U = random_unitary(6, rng);
  CVec d(6);
  d << 1, 1, -1, -1, 1, -1;
  Mat X = U * d.asDiagonal() * U.adjoint();
  SpectralData sd = spectral_data(X, poly_pm1());
  CHECK(sd.cond_s == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(dist(sd.metric, Mat(Mat::Identity(6, 6))) <= 1e-12);
  // Idempotents are the orthogonal spectral projections; p_i = e_i, c = X.
  for (int i = 0; i < 2; ++i)
    CHECK(dist(sd.projections[static_cast<std::size_t>(i)],
               sd.idempotents[static_cast<std::size_t>(i)]) <= 1e-10);
  CHECK(dist(sd.similarity_image, X) <= 1e-10);
}

TEST_CASE("spectral_data single cluster") {
  Mat X = 0.5 * Mat::Identity(3, 3);
  Polynomial p({{0.5, 2}});
  SpectralData sd = spectral_data(X, p);
  CHECK(dist(sd.idempotents[0], Mat(Mat::Identity(3, 3))) <= 1e-14);
  CHECK(dist(sd.metric, Mat(Mat::Identity(3, 3))) <= 1e-14);
}

TEST_CASE("empty cluster is a zero idempotent") {
  Polynomial p({{0.0, 1}, {2.0, 1}});
  Mat X = Mat::Zero(2, 2);
  SpectralData sd = spectral_data(X, p);
  CHECK(dist(sd.idempotents[0], Mat(Mat::Identity(2, 2))) <= 1e-14);
  CHECK(opnorm(sd.idempotents[1]) <= 1e-14);
}

TEST_CASE("Schur route matches the eigenvector-basis oracle") {
  std::mt19937_64 rng(31);
  Polynomial polys[] = {poly_pm1(), Polynomial({{0.0, 1}, {2.0, 1}}),
                        poly_t_tm1_tp1()};
  for (const auto& p : polys) {
    for (int trial = 0; trial < 20; ++trial) {
      const int dim = 3 + static_cast<int>(trial % 2);
      // Diagonalizable input with eigenvalues near the roots.
      Mat V = Mat::Identity(dim, dim) + 0.25 * random_ginibre(dim, rng);
      CVec d(dim);
      std::uniform_real_distribution<double> u(-0.05, 0.05);
      for (int i = 0; i < dim; ++i) {
        const auto& rf = p.roots()[static_cast<std::size_t>(i % p.num_roots())];
        d(i) = rf.root + Complex(u(rng), u(rng));
      }
      Mat X = V * d.asDiagonal() * V.inverse();
      SpectralData sd = spectral_data(X, p);
      auto oracle = eigenbasis_idempotents(X, p);
      for (int r = 0; r < p.num_roots(); ++r)
        CHECK(dist(sd.idempotents[static_cast<std::size_t>(r)],
                   oracle[static_cast<std::size_t>(r)]) <= 1e-8);
    }
  }
}

TEST_CASE("similarity covariance of the idempotents") {
  std::mt19937_64 rng(41);
  Polynomial p = poly_pm1();
  Mat U = random_unitary(4, rng);
  CVec d(4);
  d << 1, -1, 1, -1;
  Mat X = U * d.asDiagonal() * U.adjoint();
  Mat V = Mat::Identity(4, 4) + 0.2 * random_ginibre(4, rng);
  Mat Y = similarity(V, X);

  SpectralData sx = spectral_data(X, p);
  SpectralData sy = spectral_data(Y, p);
  for (int r = 0; r < 2; ++r) {
    Mat expected = similarity(V, sx.idempotents[static_cast<std::size_t>(r)]);
    CHECK(dist(sy.idempotents[static_cast<std::size_t>(r)], expected) <= 1e-8);
  }
}

TEST_CASE("exact defective input satisfies the corner identities") {
  std::mt19937_64 rng(43);
  // J2(0) + J2(1) blocks under a mild similarity; annihilated by t^2(t-1)^2.
  Mat blocks = Mat::Zero(4, 4);
  blocks(0, 1) = 1.0;
  blocks(2, 2) = 1.0;
  blocks(3, 3) = 1.0;
  blocks(2, 3) = 1.0;
  Mat V = Mat::Identity(4, 4) + 0.2 * random_ginibre(4, rng);
  Mat X = similarity(V, blocks);
  Polynomial p = poly_t2_tm1_2();
  REQUIRE(opnorm(eval_poly(p, X)) <= 1e-12);

  SpectralData sd = spectral_data(X, p);
  SpectralResiduals r = spectral_residuals(sd, p);
  CHECK(r.corner_annihilation <= 1e-8);
  CHECK(r.corner_offdiag <= 1e-8);
  CHECK(r.projection_sum <= 1e-10);
}

TEST_CASE("metric singularity is reported, not silently inverted") {
  // Force an almost-parallel eigenbasis: eigenvalues still separate, the
  // idempotents blow up, and s becomes ill conditioned. With a gap this is
  // fine; the guard trips only in truly degenerate cases, so here we just
  // confirm cond_s is surfaced.
  Polynomial p({{0.0, 1}, {2.0, 1}});
  Mat V(2, 2);
  V << 1.0, 1.0, 0.0, 1e-4;
  Mat D = m2(0, 0, 0, 2);
  Mat X = V * D * V.inverse();
  SpectralData sd = spectral_data(X, p);
  CHECK(sd.cond_s > 1e4);
}
