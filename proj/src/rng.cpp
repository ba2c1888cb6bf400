#include "algstab/rng.hpp"

#include <algorithm>
#include <vector>

#include <Eigen/QR>

namespace algstab {

Mat random_ginibre(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat X(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i) X(i, j) = Complex(g(rng), g(rng));
  return X / std::sqrt(2.0 * static_cast<double>(dim));
}

Mat random_unitary(Eigen::Index dim, std::mt19937_64& rng) {
  Mat G = random_ginibre(dim, rng);
  Eigen::HouseholderQR<Mat> qr(G);
  Mat Q = qr.householderQ();
  Mat R = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phases so the distribution is Haar.
  for (Eigen::Index j = 0; j < dim; ++j) {
    Complex d = R(j, j);
    double a = std::abs(d);
    Q.col(j) *= (a > 0) ? d / a : Complex(1, 0);
  }
  return Q;
}

Mat random_hermitian(Eigen::Index dim, std::mt19937_64& rng) {
  Mat G = random_ginibre(dim, rng);
  return 0.5 * (G + Mat(G.adjoint()));
}

Mat random_psd_with_cond(Eigen::Index dim, double cond, std::mt19937_64& rng) {
  Mat U = random_unitary(dim, rng);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RVec d(dim);
  d(0) = 1.0;
  if (dim > 1) d(dim - 1) = 1.0 / cond;
  for (Eigen::Index i = 1; i + 1 < dim; ++i)
    d(i) = 1.0 / cond + (1.0 - 1.0 / cond) * u(rng);
  Mat S = U * d.cast<Complex>().asDiagonal() * U.adjoint();
  return 0.5 * (S + Mat(S.adjoint()));
}

Mat random_staircase_nilpotent(Eigen::Index dim, int order, std::mt19937_64& rng) {
  const int k = std::min<int>(order, static_cast<int>(dim));
  Mat N = Mat::Zero(dim, dim);
  if (k < 2) return N;

  // Grade sizes: as even as possible, every grade nonempty.
  std::vector<Eigen::Index> sizes(k, dim / k);
  for (int i = 0; i < static_cast<int>(dim % k); ++i) sizes[i] += 1;
  std::vector<Eigen::Index> offset(k + 1, 0);
  for (int i = 0; i < k; ++i) offset[i + 1] = offset[i] + sizes[i];

  // Blocks map grade j+1 into grade j with singular values in [3/4, 1]:
  // every power of the result keeps its true singular values above 0.31,
  // clear of the largest threshold cut the chain builder can choose.
  std::uniform_real_distribution<double> u(0.75, 1.0);
  for (int j = 0; j + 1 < k; ++j) {
    const Eigen::Index r = sizes[j], c = sizes[j + 1];
    const Eigen::Index m = std::min(r, c);
    Mat Ur = random_unitary(r, rng), Vc = random_unitary(c, rng);
    Mat B = Mat::Zero(r, c);
    for (Eigen::Index i = 0; i < m; ++i) B(i, i) = u(rng);
    N.block(offset[j], offset[j + 1], r, c) = Ur * B * Vc.adjoint();
  }
  return N;
}

}  // namespace algstab
