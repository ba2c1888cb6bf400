#pragma once

#include <vector>

#include "algstab/types.hpp"

namespace algstab {

enum class TailModel { Truncated, Periodic };

// Finite prefix of a matrix sequence; the model for an element of the
// product algebra modulo its vanishing-at-infinity ideal. "Compact" means
// term norms vanish along the tail, the essential norm is the trailing
// window maximum.
struct MatSeq {
  std::vector<Mat> terms;
  TailModel tail = TailModel::Truncated;
  int period = 0;

  int length() const { return static_cast<int>(terms.size()); }
};

}  // namespace algstab
