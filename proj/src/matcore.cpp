#include "algstab/matcore.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "algstab/errors.hpp"

namespace algstab {

bool all_finite(const Mat& x) {
  return x.array().isFinite().all();
}

namespace {

void require_square(const Mat& X, const char* who) {
  if (X.rows() != X.cols())
    throw DimensionMismatch(std::string(who) + ": matrix is not square");
  if (!all_finite(X))
    throw ValidationError(std::string(who) + ": non-finite entries");
}

}  // namespace

double opnorm(const Mat& X) {
  if (X.size() == 0) return 0.0;
  if (!all_finite(X)) throw ValidationError("opnorm: non-finite entries");
  // Full SVD rather than iteration; dimensions are desk-scale.
  if (X.rows() <= 128 && X.cols() <= 128) {
    Eigen::JacobiSVD<Mat> svd(X);
    return svd.singularValues()(0);
  }
  Eigen::BDCSVD<Mat> svd(X);
  return svd.singularValues()(0);
}

HermitianEig herm_eig(const Mat& X, double htol) {
  require_square(X, "herm_eig");
  const double scale = opnorm(X);
  const double skew = opnorm(Mat(X - X.adjoint()));
  if (skew > htol * std::max(1.0, scale))
    throw NotHermitian("herm_eig: matrix is not Hermitian (skew part " +
                       std::to_string(skew) + ")");
  Mat H = 0.5 * (X + X.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(H);
  if (es.info() != Eigen::Success)
    throw ValidationError("herm_eig: eigensolver failed to converge");
  return HermitianEig{es.eigenvalues(), es.eigenvectors()};
}

namespace {

Mat psd_power_half(const Mat& S, double htol, double ptol, bool inverse,
                   const char* who) {
  HermitianEig eig = herm_eig(S, htol);
  const double lmin = eig.eigenvalues.minCoeff();
  if (lmin < ptol)
    throw NotPositiveDefinite(
        std::string(who) + ": eigenvalue " + std::to_string(lmin) +
            " below positivity floor",
        lmin);
  RVec d = eig.eigenvalues.array().sqrt();
  if (inverse) d = d.array().inverse();
  Mat R = eig.eigenvectors * d.asDiagonal() * eig.eigenvectors.adjoint();
  return 0.5 * (R + Mat(R.adjoint()));
}

}  // namespace

Mat psd_sqrt(const Mat& S, double htol, double ptol) {
  return psd_power_half(S, htol, ptol, false, "psd_sqrt");
}

Mat psd_inv_sqrt(const Mat& S, double htol, double ptol) {
  return psd_power_half(S, htol, ptol, true, "psd_inv_sqrt");
}

Mat apply_function(const Mat& Y, const std::function<Complex(double)>& f,
                   double htol) {
  HermitianEig eig = herm_eig(Y, htol);
  CVec d(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = f(eig.eigenvalues(i));
  return eig.eigenvectors * d.asDiagonal() * eig.eigenvectors.adjoint();
}

Mat similarity(const Mat& V, const Mat& X, double ptol) {
  require_square(V, "similarity");
  require_square(X, "similarity");
  if (V.rows() != X.rows())
    throw DimensionMismatch("similarity: dimension mismatch");
  Eigen::JacobiSVD<Mat> svd(V);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(svd.singularValues().size() - 1);
  if (!(smin >= ptol * smax))
    throw SingularTransform("similarity: transform is numerically singular");
  Mat Vinv = V.partialPivLu().inverse();
  return V * X * Vinv;
}

}  // namespace algstab
