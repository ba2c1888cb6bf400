#pragma once

#include <string>
#include <tuple>
#include <vector>

#include "algstab/lifter.hpp"
#include "algstab/poly.hpp"
#include "algstab/seqmodel_types.hpp"
#include "algstab/types.hpp"

namespace algstab {

struct EssentialNormEstimate {
  double value = 0.0;  // max term norm over the trailing window
  int window = 0;
};

// Trailing-window limsup proxy; window 0 selects ceil(L/3).
EssentialNormEstimate essential_norm(const MatSeq& s, int window = 0);

struct TermCorrection {
  int index = 0;                  // 1-based position in the sequence
  bool corrected = false;
  double residual_before = 0.0;   // ||p(S_k)||
  double correction_norm = 0.0;   // ||K_k||
  double corrected_norm = 0.0;    // ||S'_k||
  double residual_after = 0.0;    // ||p(S'_k)||
  std::string refusal;            // why a term was passed through
};

struct CompactCorrectReport {
  std::vector<TermCorrection> terms;
  int window = 0;
  double essential_before = 0.0;
  double essential_after = 0.0;
  double trailing_max_residual_after = 0.0;
  double trailing_max_correction = 0.0;
  double essential_norm_drift = 0.0;  // |max trailing ||S'_k|| - essential_before|
  double holder_ratio = 0.0;  // trailing max ||K_k|| / max ||p(S_k)||^{1/deg}
  bool all_corrected = true;
};

struct CompactCorrectOptions {
  StabilizeOptions stabilize;
  int window = 0;   // 0: ceil(L/3)
  int jobs = 1;
  double seqtol = kSeqtol;
};

// Per-term stabilization with the global essential-norm estimate as cap:
// S'_k = stabilize(S_k, p, max(ess, ||S_k||)), K = S' - S. Terms before the
// window that refuse are passed through unchanged and flagged; a refusal
// inside the trailing window throws OutsideBasin.
std::tuple<MatSeq, MatSeq, CompactCorrectReport> compact_correct(
    const MatSeq& s, const Polynomial& p, const CompactCorrectOptions& opts = {});

// Round a family of approximate orthogonal projections with approximate sum
// I to an exact resolution of identity, by clustering the spectrum of
// sum i*F_i at the integers.
std::vector<Mat> lift_projection_family(const std::vector<Mat>& F, double tol);

// Corner compressions R_k X R_k on the first rank basis vectors, viewed in
// the rank x rank corner.
MatSeq rfd_compress(const Mat& X, const std::vector<int>& ranks);

}  // namespace algstab
