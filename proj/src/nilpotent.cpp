#include "algstab/nilpotent.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "algstab/errors.hpp"
#include "algstab/matcore.hpp"

namespace algstab {

namespace {

struct CutResult {
  int rank = 0;
  double gap_ratio = std::numeric_limits<double>::infinity();
};

CutResult split_at_cut(const RVec& sv, double cut) {
  CutResult r;
  double above = 0.0;  // smallest singular value above the cut
  double below = 0.0;  // largest singular value at or below the cut
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cut) {
      r.rank += 1;
      above = sv(i);
    } else {
      below = sv(i);
      break;  // sv is sorted descending
    }
  }
  if (r.rank > 0 && below > 0.0) r.gap_ratio = above / below;
  if (r.rank == 0 && below > 0.0) r.gap_ratio = cut / below;
  return r;
}

}  // namespace

NilChain build_chain(const Mat& N, int k, const ChainOptions& opts) {
  if (N.rows() != N.cols())
    throw DimensionMismatch("build_chain: matrix is not square");
  if (k < 2) throw ValidationError("build_chain: order must be at least 2");
  const Eigen::Index n = N.rows();

  const double norm_n = opnorm(N);
  NilChain chain;
  chain.order = k;
  if (norm_n == 0.0) {
    chain.tau = opts.tau > 0.0 ? opts.tau : opts.tau_min;
    chain.flags.assign(static_cast<std::size_t>(k - 1), Mat::Zero(n, n));
    chain.ranks.assign(static_cast<std::size_t>(k - 1), 0);
    chain.cuts.assign(static_cast<std::size_t>(k - 1), 0.0);
    chain.gap_ratios.assign(static_cast<std::size_t>(k - 1),
                            std::numeric_limits<double>::infinity());
    return chain;
  }

  std::vector<Mat> powers;  // N^1 .. N^k
  powers.reserve(static_cast<std::size_t>(k));
  powers.push_back(N);
  for (int j = 1; j < k; ++j) powers.push_back(powers.back() * N);

  double tau = opts.tau;
  if (tau <= 0.0) {
    const double resid = opnorm(powers.back());  // ||N^k||
    tau = std::clamp(10.0 * std::pow(resid, 1.0 / k) / norm_n, opts.tau_min,
                     opts.tau_max);
  }
  chain.tau = tau;

  // Right singular bases of each power, split at the cut.
  std::vector<Mat> bases(static_cast<std::size_t>(k - 1));
  chain.ranks.resize(static_cast<std::size_t>(k - 1));
  chain.cuts.resize(static_cast<std::size_t>(k - 1));
  chain.gap_ratios.resize(static_cast<std::size_t>(k - 1));
  for (int j = 1; j < k; ++j) {
    const double cut = tau * std::pow(norm_n, j);
    Eigen::JacobiSVD<Mat> svd(powers[static_cast<std::size_t>(j - 1)],
                              Eigen::ComputeThinV);
    const CutResult cr = split_at_cut(svd.singularValues(), cut);
    if (cr.gap_ratio < opts.gap_min)
      throw ChainGapFailure(
          "build_chain: singular values of N^" + std::to_string(j) +
              " cluster at the threshold cut (gap ratio " +
              std::to_string(cr.gap_ratio) + ")",
          j, cr.gap_ratio);
    chain.ranks[static_cast<std::size_t>(j - 1)] = cr.rank;
    chain.cuts[static_cast<std::size_t>(j - 1)] = cut;
    chain.gap_ratios[static_cast<std::size_t>(j - 1)] = cr.gap_ratio;
    bases[static_cast<std::size_t>(j - 1)] = svd.matrixV().leftCols(cr.rank);
  }

  // Assemble one orthonormal basis from the deepest level up so the flags
  // nest exactly. Each level keeps the previous columns and appends the
  // strongest new directions from its own singular basis.
  Mat F(n, 0);
  chain.flags.resize(static_cast<std::size_t>(k - 1));
  for (int j = k - 1; j >= 1; --j) {
    const Mat& B = bases[static_cast<std::size_t>(j - 1)];
    const int want = std::max(chain.ranks[static_cast<std::size_t>(j - 1)],
                              static_cast<int>(F.cols()));
    const int add = want - static_cast<int>(F.cols());
    if (add > 0) {
      Mat R = B;
      if (F.cols() > 0) R -= F * (F.adjoint() * B);
      Eigen::JacobiSVD<Mat> rsvd(R, Eigen::ComputeThinU);
      Mat Fnew(n, F.cols() + add);
      Fnew << F, rsvd.matrixU().leftCols(add);
      // One re-orthonormalization pass keeps the basis unitary to machine
      // precision after the projection.
      Eigen::HouseholderQR<Mat> qr(Fnew);
      Mat Q = qr.householderQ();
      F = Q.leftCols(Fnew.cols());
    }
    chain.flags[static_cast<std::size_t>(j - 1)] = F * F.adjoint();
    chain.ranks[static_cast<std::size_t>(j - 1)] = static_cast<int>(F.cols());
  }
  return chain;
}

Mat truncate_to_nilpotent(const Mat& X, int k, const NilChain& chain) {
  if (X.rows() != X.cols())
    throw DimensionMismatch("truncate_to_nilpotent: matrix is not square");
  if (chain.order != k || static_cast<int>(chain.flags.size()) != k - 1)
    throw ValidationError("truncate_to_nilpotent: chain order mismatch");
  const Eigen::Index n = X.rows();
  if (chain.flags[0].rows() != n)
    throw DimensionMismatch("truncate_to_nilpotent: chain dimension mismatch");

  Mat result = Mat::Zero(n, n);
  Mat prev = Mat::Identity(n, n);  // E_0
  for (int j = 1; j < k; ++j) {
    const Mat& Ej = chain.E(j);
    result += (prev - Ej) * X * Ej;  // D_j = E_j
    prev = Ej;
  }

  const double nx = opnorm(X);
  const double nr = opnorm(result);
  if (nr > nx && nr > 0.0) result *= nx / nr;
  return result;
}

int nilpotency_order(const Mat& X, double tol) {
  if (X.rows() != X.cols())
    throw DimensionMismatch("nilpotency_order: matrix is not square");
  const Eigen::Index n = X.rows();
  const double norm_x = opnorm(X);
  if (norm_x == 0.0) return 1;
  Mat power = X;
  double bound = norm_x;
  for (int kk = 1; kk <= static_cast<int>(n); ++kk) {
    if (kk > 1) {
      power = power * X;
      bound *= norm_x;
    }
    if (opnorm(power) <= tol * bound) return kk;
  }
  return static_cast<int>(n) + 1;
}

}  // namespace algstab
