#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "algstab/lifter.hpp"
#include "algstab/poly.hpp"

namespace algstab {

// Stability-curve experiment: exact solutions perturbed by eps-scaled noise,
// stabilized, distances recorded across the eps grid.
struct CurveConfig {
  int dim = 8;
  std::vector<double> eps_grid;
  int trials = 20;
  std::uint64_t seed = 0;
  double headroom = 1.25;  // C = headroom * max(1, ||X0||)
  double cond_cap = 2.0;   // similarity conditioning of the exact solutions
  int jobs = 1;
  StabilizeOptions opts;
};

struct CurvePoint {
  double eps = 0.0;
  int trial = 0;
  bool refused = false;
  std::string refusal;
  double distance = 0.0;
  double residual_before = 0.0;
  double residual_after = 0.0;
  double norm_after = 0.0;
  double bound = 0.0;  // the C used for this trial
};

// Rows ordered by (eps index, trial) regardless of scheduling.
std::vector<CurvePoint> run_curve(const Polynomial& p, const CurveConfig& cfg);

// Geometric grid from lo to hi inclusive.
std::vector<double> geometric_grid(double lo, double hi, int points);

}  // namespace algstab
