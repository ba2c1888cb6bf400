#include "algstab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>

#include "algstab/errors.hpp"
#include "algstab/matcore.hpp"

namespace algstab {

namespace {

// Assign each value to the nearest root; distance gate only when there is a
// choice to get wrong.
std::vector<int> assign_to_roots(const CVec& values, const Polynomial& p) {
  const auto& roots = p.roots();
  std::vector<int> assignment(values.size(), 0);
  if (roots.size() == 1) return assignment;

  const double radius = p.cluster_radius();
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    int best = 0, second = 1;
    double dbest = std::abs(values(i) - roots[0].root);
    double dsecond = std::abs(values(i) - roots[1].root);
    if (dsecond < dbest) {
      std::swap(best, second);
      std::swap(dbest, dsecond);
    }
    for (int r = 2; r < static_cast<int>(roots.size()); ++r) {
      const double d = std::abs(values(i) - roots[r].root);
      if (d < dbest) {
        second = best;
        dsecond = dbest;
        best = r;
        dbest = d;
      } else if (d < dsecond) {
        second = r;
        dsecond = d;
      }
    }
    if (dbest >= radius)
      throw ClusterAmbiguous(
          "cluster_eigenvalues: eigenvalue (" + std::to_string(values(i).real()) +
              "," + std::to_string(values(i).imag()) +
              ") is not within the cluster radius of a unique root",
          values(i), roots[best].root, roots[second].root);
    assignment[i] = best;
  }
  return assignment;
}

// Swap adjacent diagonal entries j, j+1 of the upper triangular T by a
// unitary similarity, updating U accordingly.
void swap_adjacent(Mat& T, Mat& U, Eigen::Index j) {
  const Complex a = T(j, j), b = T(j, j + 1), c = T(j + 1, j + 1);
  // Eigenvector of [[a, b], [0, c]] for eigenvalue c.
  Complex v0 = b, v1 = c - a;
  const double r = std::sqrt(std::norm(v0) + std::norm(v1));
  if (r == 0.0) return;  // equal eigenvalues, nothing to move
  v0 /= r;
  v1 /= r;
  Mat G(2, 2);
  G << v0, -std::conj(v1), v1, std::conj(v0);
  T.block(j, 0, 2, T.cols()) = G.adjoint() * T.block(j, 0, 2, T.cols());
  T.block(0, j, T.rows(), 2) = T.block(0, j, T.rows(), 2) * G;
  U.block(0, j, U.rows(), 2) = U.block(0, j, U.rows(), 2) * G;
  T(j + 1, j) = 0.0;
}

// Move the selected diagonal positions to the front, preserving relative
// order, via adjacent swaps.
void move_cluster_to_front(Mat& T, Mat& U, const std::vector<char>& selected) {
  Eigen::Index target = 0;
  for (Eigen::Index i = 0; i < T.rows(); ++i) {
    if (!selected[static_cast<std::size_t>(i)]) continue;
    for (Eigen::Index j = i; j > target; --j) swap_adjacent(T, U, j - 1);
    ++target;
  }
}

// Solve A Y - Y B = C with A (m x m) and B upper triangular, by columns.
Mat sylvester_triangular(const Mat& A, const Mat& B, const Mat& C) {
  const Eigen::Index m = A.rows(), n = B.rows();
  Mat Y = Mat::Zero(m, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    CVec rhs = C.col(j);
    for (Eigen::Index k = 0; k < j; ++k) rhs += Y.col(k) * B(k, j);
    Mat Aj = A - B(j, j) * Mat::Identity(m, m);
    Y.col(j) = Aj.triangularView<Eigen::Upper>().solve(rhs);
  }
  return Y;
}

}  // namespace

std::vector<int> cluster_eigenvalues(const Mat& X, const Polynomial& p) {
  if (X.rows() != X.cols())
    throw DimensionMismatch("cluster_eigenvalues: matrix is not square");
  Eigen::ComplexSchur<Mat> schur(X, /*computeU=*/false);
  if (schur.info() != Eigen::Success)
    throw ValidationError("cluster_eigenvalues: Schur decomposition failed");
  return assign_to_roots(schur.matrixT().diagonal(), p);
}

SpectralData spectral_data(const Mat& X, const Polynomial& p, double stol) {
  if (X.rows() != X.cols())
    throw DimensionMismatch("spectral_data: matrix is not square");
  if (!all_finite(X)) throw ValidationError("spectral_data: non-finite entries");
  const Eigen::Index n = X.rows();
  if (stol <= 0.0) stol = stol_default(n);
  const int nroots = p.num_roots();

  SpectralData sd;
  sd.idempotents.resize(nroots);

  if (nroots == 1) {
    sd.cluster_of_eigenvalue.assign(static_cast<std::size_t>(n), 0);
    sd.idempotents[0] = Mat::Identity(n, n);
  } else {
    Eigen::ComplexSchur<Mat> schur(X, /*computeU=*/true);
    if (schur.info() != Eigen::Success)
      throw ValidationError("spectral_data: Schur decomposition failed");
    const Mat T0 = schur.matrixT();
    const Mat U0 = schur.matrixU();
    sd.cluster_of_eigenvalue = assign_to_roots(T0.diagonal(), p);

    for (int r = 0; r < nroots; ++r) {
      std::vector<char> selected(static_cast<std::size_t>(n), 0);
      Eigen::Index m = 0;
      for (Eigen::Index i = 0; i < n; ++i)
        if (sd.cluster_of_eigenvalue[static_cast<std::size_t>(i)] == r) {
          selected[static_cast<std::size_t>(i)] = 1;
          ++m;
        }
      if (m == 0) {
        sd.idempotents[r] = Mat::Zero(n, n);
        continue;
      }
      if (m == n) {
        sd.idempotents[r] = Mat::Identity(n, n);
        continue;
      }
      Mat T = T0, U = U0;
      move_cluster_to_front(T, U, selected);
      // T = [[A, C], [0, B]] with the cluster leading; the idempotent in the
      // Schur basis is [[I, Y], [0, 0]] where A Y - Y B = C.
      const Mat A = T.topLeftCorner(m, m);
      const Mat B = T.bottomRightCorner(n - m, n - m);
      const Mat C = T.topRightCorner(m, n - m);
      const Mat Y = sylvester_triangular(A, B, C);
      Mat P = Mat::Zero(n, n);
      P.topLeftCorner(m, m) = Mat::Identity(m, m);
      P.topRightCorner(m, n - m) = Y;
      sd.idempotents[r] = U * P * U.adjoint();
    }
  }

  Mat s = Mat::Zero(n, n);
  for (const Mat& e : sd.idempotents) s += e.adjoint() * e;
  s = 0.5 * (s + Mat(s.adjoint()));
  sd.metric = s;

  HermitianEig eig = herm_eig(s);
  const double lmin = eig.eigenvalues.minCoeff();
  const double lmax = eig.eigenvalues.maxCoeff();
  if (lmin < kPtol)
    throw MetricSingular("spectral_data: metric element is numerically singular",
                         lmin);
  sd.cond_s = lmax / lmin;
  RVec rt = eig.eigenvalues.array().sqrt();
  sd.metric_sqrt = eig.eigenvectors * rt.cast<Complex>().asDiagonal() *
                   eig.eigenvectors.adjoint();
  RVec rti = rt.array().inverse();
  sd.metric_inv_sqrt = eig.eigenvectors * rti.cast<Complex>().asDiagonal() *
                       eig.eigenvectors.adjoint();

  sd.projections.resize(nroots);
  for (int r = 0; r < nroots; ++r) {
    Mat pr = sd.metric_sqrt * sd.idempotents[r] * sd.metric_inv_sqrt;
    sd.projections[r] = 0.5 * (pr + Mat(pr.adjoint()));
  }
  sd.similarity_image = sd.metric_sqrt * X * sd.metric_inv_sqrt;

  // Structural sanity; failures mean the idempotents lost all precision.
  Mat esum = Mat::Zero(n, n);
  for (const Mat& e : sd.idempotents) esum += e;
  const double defect = opnorm(Mat(esum - Mat::Identity(n, n)));
  if (defect > std::max(stol, 1e3 * rtol(n) * sd.cond_s))
    throw OutsideBasin(
        "spectral_data: idempotents do not resolve the identity (residual " +
        std::to_string(defect) + ")");
  return sd;
}

SpectralResiduals spectral_residuals(const SpectralData& sd, const Polynomial& p) {
  const Eigen::Index n = sd.metric.rows();
  const Mat I = Mat::Identity(n, n);
  SpectralResiduals res{};

  Mat esum = Mat::Zero(n, n);
  for (const Mat& e : sd.idempotents) esum += e;
  res.idempotent_sum = opnorm(Mat(esum - I));

  res.idempotent_cross_max = 0.0;
  for (std::size_t i = 0; i < sd.idempotents.size(); ++i)
    for (std::size_t j = 0; j < sd.idempotents.size(); ++j) {
      if (i == j) continue;
      res.idempotent_cross_max = std::max(
          res.idempotent_cross_max, opnorm(Mat(sd.idempotents[i] * sd.idempotents[j])));
    }

  res.projection_defect = 0.0;
  Mat psum = Mat::Zero(n, n);
  for (const Mat& q : sd.projections) {
    res.projection_defect =
        std::max(res.projection_defect, opnorm(Mat(q - q.adjoint())));
    res.projection_defect =
        std::max(res.projection_defect, opnorm(Mat(q * q - q)));
    psum += q;
  }
  res.projection_sum = opnorm(Mat(psum - I));

  const Mat& c = sd.similarity_image;
  Mat pinch = Mat::Zero(n, n);
  for (const Mat& q : sd.projections) pinch += q * c * q;
  res.corner_offdiag = opnorm(Mat(pinch - c));

  res.corner_annihilation = 0.0;
  for (int r = 0; r < p.num_roots(); ++r) {
    const auto& rf = p.roots()[static_cast<std::size_t>(r)];
    Mat shifted = c - rf.root * I;
    Mat power = I;
    for (int k = 0; k < rf.multiplicity; ++k) power = power * shifted;
    res.corner_annihilation = std::max(
        res.corner_annihilation,
        opnorm(Mat(sd.projections[static_cast<std::size_t>(r)] * power *
                   sd.projections[static_cast<std::size_t>(r)])));
  }
  return res;
}

}  // namespace algstab
