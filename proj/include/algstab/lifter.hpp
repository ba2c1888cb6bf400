#pragma once

#include <vector>

#include "algstab/nilpotent.hpp"
#include "algstab/poly.hpp"
#include "algstab/spectral.hpp"
#include "algstab/types.hpp"

namespace algstab {

struct StabilizeOptions {
  double stol = 0.0;       // <= 0: 1e-8 * dim
  double tau = 0.0;        // <= 0: auto per chain
  double captol = kCaptol;
  double pretol = kPretol;
  double gap_min = 2.0;
};

struct StabilizationReport {
  Mat output;
  double residual_before = 0.0;  // ||p(X)||
  double residual_after = 0.0;   // ||p(X')||
  double distance = 0.0;         // ||X - X'||
  double norm_before = 0.0;
  double norm_after = 0.0;
  Regime regime = Regime::Unsupported;
  double cond_s = 1.0;
  double cap_factor = 1.0;  // theta (multiple roots) or nu (simple real)
};

// Continuous clamp: constant t_i on each neighborhood O_i intersected with
// the reals, linear between plateaus, constant beyond the outer ones,
// clipped to [-C, C].
class ClampFunction {
 public:
  ClampFunction(const Polynomial& p, double C);
  double operator()(double t) const;
  double bound() const { return bound_; }
  double radius() const { return radius_; }

 private:
  std::vector<double> roots_;  // sorted
  double radius_;
  double bound_;
};

// Given X with ||p(X)|| small and ||X|| <= C(1+pretol), produce X' with
// p(X') = 0 to machine precision, ||X'|| <= C(1+captol), near X.
StabilizationReport stabilize(const Mat& X, const Polynomial& p, double C,
                              const StabilizeOptions& opts = {});

// Branches; stabilize() dispatches on classify(p).
StabilizationReport stabilize_multiple(const Mat& X, const Polynomial& p, double C,
                                       const StabilizeOptions& opts = {});
StabilizationReport stabilize_simple_real(const Mat& X, const Polynomial& p,
                                          double C,
                                          const StabilizeOptions& opts = {});

// Contract the nilpotent legs of an exact solution X' (regime AllMultiple)
// until the norm clears C(1+captol). Scaling a nilpotent leg preserves
// exactness for any theta. Returns the capped matrix and theta.
std::pair<Mat, double> norm_cap(const Mat& Xprime, const Polynomial& p,
                                const SpectralData& sd, double C,
                                double captol = kCaptol);

}  // namespace algstab
