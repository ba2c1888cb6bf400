#pragma once

#include <vector>

#include "algstab/poly.hpp"
#include "algstab/types.hpp"

namespace algstab {

// Canonical data attached to an (approximately) algebraic matrix: spectral
// idempotents e_i per root cluster, metric s = sum e_i* e_i, orthogonal
// projections p_i = s^{1/2} e_i s^{-1/2} and the similarity image
// c = s^{1/2} X s^{-1/2}, which is block-diagonal across the p_i.
struct SpectralData {
  std::vector<Mat> idempotents;   // e_i, one per root (zero when cluster empty)
  Mat metric;                     // s, Hermitian positive definite
  Mat metric_sqrt;                // s^{1/2}
  Mat metric_inv_sqrt;            // s^{-1/2}
  std::vector<Mat> projections;   // p_i
  Mat similarity_image;           // c
  double cond_s = 1.0;
  std::vector<int> cluster_of_eigenvalue;  // Schur order -> root index
};

// Nearest-root assignment for the eigenvalues of X. Fails with
// ClusterAmbiguous when an eigenvalue is farther than cluster_radius from
// every root. A single-root polynomial assigns everything to its root: the
// idempotent over the whole spectrum is the identity, so no ambiguity can
// exist.
std::vector<int> cluster_eigenvalues(const Mat& X, const Polynomial& p);

SpectralData spectral_data(const Mat& X, const Polynomial& p, double stol = 0.0);

// Residuals of the identities the data is supposed to satisfy; used by
// diagnostics and tests.
struct SpectralResiduals {
  double idempotent_sum;        // || sum e_i - I ||
  double idempotent_cross_max;  // max_{i != j} || e_i e_j ||
  double projection_defect;     // max_i max(|| p_i - p_i* ||, || p_i^2 - p_i ||)
  double projection_sum;        // || sum p_i - I ||
  double corner_offdiag;        // || sum_i p_i c p_i - c ||
  double corner_annihilation;   // max_i || p_i (c - l_i)^{k_i} p_i ||
};

SpectralResiduals spectral_residuals(const SpectralData& sd, const Polynomial& p);

}  // namespace algstab
