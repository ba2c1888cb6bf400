#pragma once

#include <string>
#include <vector>

#include "algstab/types.hpp"

namespace algstab {

struct RootFactor {
  Complex root;
  int multiplicity = 1;
};

// Annihilating polynomial in factored form p(t) = (t-l1)^k1 ... (t-ln)^kn.
// Factored input is deliberate: multiplicity detection from coefficients is
// ill-posed in floating point.
class Polynomial {
 public:
  explicit Polynomial(std::vector<RootFactor> roots);

  const std::vector<RootFactor>& roots() const { return roots_; }
  int degree() const { return degree_; }
  int num_roots() const { return static_cast<int>(roots_.size()); }

  // Minimal pairwise distance between roots; 1 + |l1| for a single root so
  // that neighborhood radii stay finite.
  double root_gap() const { return root_gap_; }
  double cluster_radius() const { return root_gap_ * kClusterRadiusFactor; }

 private:
  std::vector<RootFactor> roots_;
  int degree_ = 0;
  double root_gap_ = 0.0;
};

enum class Regime { AllMultiple, AllSimpleReal, Unsupported };

const char* regime_name(Regime r);

// Total and deterministic; mixed multiplicities or non-real simple roots
// land in Unsupported.
Regime classify(const Polynomial& p);

// p(X) = prod_i (X - l_i I)^{k_i}, factors multiplied left to right in
// stored root order.
Mat eval_poly(const Polynomial& p, const Mat& X);

// Largest delta such that |p(t)| <= delta, t real, |t| <= C implies t lies
// within cluster_radius of some root. Grid minimization over the excluded
// region with the result halved, so the returned value underestimates.
// Requires regime AllSimpleReal.
double spectral_gap_threshold(const Polynomial& p, double C);

}  // namespace algstab
