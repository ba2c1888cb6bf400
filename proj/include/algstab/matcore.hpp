#pragma once

#include <functional>

#include "algstab/types.hpp"

namespace algstab {

// Operator norm (largest singular value).
double opnorm(const Mat& X);

struct HermitianEig {
  RVec eigenvalues;  // ascending
  Mat eigenvectors;  // unitary, columns
};

// Eigendecomposition of (X + X*)/2. Throws NotHermitian when the skew part
// exceeds htol * max(1, ||X||).
HermitianEig herm_eig(const Mat& X, double htol = kHtol);

// Hermitian PSD square root / inverse square root. Eigenvalues must clear
// ptol; the offending eigenvalue is carried in the error.
Mat psd_sqrt(const Mat& S, double htol = kHtol, double ptol = kPtol);
Mat psd_inv_sqrt(const Mat& S, double htol = kHtol, double ptol = kPtol);

// U f(diag) U* through herm_eig.
Mat apply_function(const Mat& Y, const std::function<Complex(double)>& f,
                   double htol = kHtol);

// V X V^{-1}; V^{-1} computed once per call. Throws SingularTransform when
// sigma_min(V) < ptol * sigma_max(V).
Mat similarity(const Mat& V, const Mat& X, double ptol = kPtol);

}  // namespace algstab
