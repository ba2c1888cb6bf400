#include "algstab/poly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "algstab/errors.hpp"

namespace algstab {

Polynomial::Polynomial(std::vector<RootFactor> roots) : roots_(std::move(roots)) {
  if (roots_.empty()) throw ValidationError("polynomial: no roots given");
  degree_ = 0;
  for (const auto& rf : roots_) {
    if (rf.multiplicity < 1)
      throw ValidationError("polynomial: multiplicity must be positive");
    if (!std::isfinite(rf.root.real()) || !std::isfinite(rf.root.imag()))
      throw ValidationError("polynomial: non-finite root");
    degree_ += rf.multiplicity;
  }
  if (roots_.size() == 1) {
    root_gap_ = 1.0 + std::abs(roots_[0].root);
  } else {
    root_gap_ = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < roots_.size(); ++i)
      for (std::size_t j = i + 1; j < roots_.size(); ++j)
        root_gap_ = std::min(root_gap_, std::abs(roots_[i].root - roots_[j].root));
    if (!(root_gap_ > 0.0))
      throw ValidationError("polynomial: repeated root (use the multiplicity field)");
  }
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::AllMultiple: return "all_multiple";
    case Regime::AllSimpleReal: return "all_simple_real";
    default: return "unsupported";
  }
}

Regime classify(const Polynomial& p) {
  bool all_multiple = true;
  bool all_simple_real = true;
  for (const auto& rf : p.roots()) {
    if (rf.multiplicity < 2) all_multiple = false;
    if (rf.multiplicity != 1 || rf.root.imag() != 0.0) all_simple_real = false;
  }
  if (all_multiple) return Regime::AllMultiple;
  if (all_simple_real) return Regime::AllSimpleReal;
  return Regime::Unsupported;
}

Mat eval_poly(const Polynomial& p, const Mat& X) {
  if (X.rows() != X.cols())
    throw DimensionMismatch("eval_poly: matrix is not square");
  const Eigen::Index n = X.rows();
  Mat acc = Mat::Identity(n, n);
  for (const auto& rf : p.roots()) {
    Mat factor = X - rf.root * Mat::Identity(n, n);
    for (int k = 0; k < rf.multiplicity; ++k) acc = acc * factor;
  }
  return acc;
}

double spectral_gap_threshold(const Polynomial& p, double C) {
  if (classify(p) != Regime::AllSimpleReal)
    throw UnsupportedRegime(
        "spectral_gap_threshold: defined only for simple real roots");
  if (!(C > 0.0) || !std::isfinite(C))
    throw ValidationError("spectral_gap_threshold: bound must be positive");

  const double radius = p.cluster_radius();
  auto abs_p = [&](double t) {
    double v = 1.0;
    for (const auto& rf : p.roots()) v *= std::abs(t - rf.root.real());
    return v;
  };
  auto excluded = [&](double t) {
    for (const auto& rf : p.roots())
      if (std::abs(t - rf.root.real()) < radius) return false;
    return true;
  };

  double best = std::numeric_limits<double>::infinity();
  const double step = p.root_gap() / 1000.0;
  for (double t = -C; t <= C; t += step)
    if (excluded(t)) best = std::min(best, abs_p(t));
  // Neighborhood boundaries are always candidates; this keeps the result
  // finite when [-C, C] is swallowed by the neighborhoods.
  for (const auto& rf : p.roots()) {
    best = std::min(best, abs_p(rf.root.real() - radius));
    best = std::min(best, abs_p(rf.root.real() + radius));
  }
  return 0.5 * best;
}

}  // namespace algstab
