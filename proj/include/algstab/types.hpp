#pragma once

#include <complex>

#include <Eigen/Dense>

namespace algstab {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

// Default tolerances. All are relative to input scale unless noted.
inline constexpr double kHtol = 1e-10;   // Hermitian-ness gate
inline constexpr double kPtol = 1e-10;   // positivity / invertibility floor (absolute)
inline constexpr double kCaptol = 1e-9;  // slack on the norm bound C
inline constexpr double kPretol = 1e-6;  // slack on the input norm precondition
inline constexpr double kSeqtol = 1e-6;  // essential-norm matching tolerance

inline double rtol(Eigen::Index dim) { return 1e-12 * static_cast<double>(dim); }
inline double stol_default(Eigen::Index dim) { return 1e-8 * static_cast<double>(dim); }

// Neighborhood radius around each root, as a fraction of the minimal root gap.
inline constexpr double kClusterRadiusFactor = 1.0 / 3.0;

bool all_finite(const Mat& x);

}  // namespace algstab
