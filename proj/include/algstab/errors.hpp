#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace algstab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Operational errors: bad dimensions, violated numeric preconditions, I/O.
// The CLI maps these to exit code 1.
struct ValidationError : Error {
  using Error::Error;
};

// Mathematically meaningful refusals: the input is outside the basin where
// the construction is defined, or the regime is not treated. Exit code 2.
struct BasinError : Error {
  using Error::Error;
};

struct DimensionMismatch : ValidationError {
  using ValidationError::ValidationError;
};

struct NotHermitian : ValidationError {
  using ValidationError::ValidationError;
};

struct NotPositiveDefinite : ValidationError {
  NotPositiveDefinite(const std::string& what, double eig)
      : ValidationError(what), offending_eigenvalue(eig) {}
  double offending_eigenvalue;
};

struct SingularTransform : ValidationError {
  using ValidationError::ValidationError;
};

struct UnsupportedRegime : BasinError {
  using BasinError::BasinError;
};

struct UnsatisfiableBound : BasinError {
  using BasinError::BasinError;
};

struct ClusterAmbiguous : BasinError {
  ClusterAmbiguous(const std::string& what, std::complex<double> eig,
                   std::complex<double> a, std::complex<double> b)
      : BasinError(what), eigenvalue(eig), nearest(a), second_nearest(b) {}
  std::complex<double> eigenvalue;
  std::complex<double> nearest;
  std::complex<double> second_nearest;
};

struct MetricSingular : BasinError {
  MetricSingular(const std::string& what, double eig)
      : BasinError(what), min_eigenvalue(eig) {}
  double min_eigenvalue;
};

struct ChainGapFailure : BasinError {
  ChainGapFailure(const std::string& what, int pw, double ratio)
      : BasinError(what), power(pw), gap_ratio(ratio) {}
  int power;
  double gap_ratio;
};

struct GapTooWide : BasinError {
  GapTooWide(const std::string& what, double res, double thr)
      : BasinError(what), residual(res), threshold(thr) {}
  double residual;
  double threshold;
};

struct OutsideBasin : BasinError {
  using BasinError::BasinError;
};

struct CapUnreachable : BasinError {
  CapUnreachable(const std::string& what, double skel, double cond)
      : BasinError(what), skeleton_norm(skel), cond_s(cond) {}
  double skeleton_norm;
  double cond_s;
};

}  // namespace algstab
