#include "algstab/seqmodel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "algstab/errors.hpp"
#include "algstab/matcore.hpp"
#include "algstab/parallel.hpp"

namespace algstab {

namespace {

int effective_window(const MatSeq& s, int window) {
  const int L = s.length();
  if (window <= 0) window = (L + 2) / 3;
  return std::min(window, L);
}

}  // namespace

EssentialNormEstimate essential_norm(const MatSeq& s, int window) {
  if (s.length() < 3)
    throw ValidationError("essential_norm: need at least 3 terms");
  const int w = effective_window(s, window);
  EssentialNormEstimate est;
  est.window = w;
  for (int k = s.length() - w; k < s.length(); ++k)
    est.value = std::max(est.value, opnorm(s.terms[static_cast<std::size_t>(k)]));
  return est;
}

std::tuple<MatSeq, MatSeq, CompactCorrectReport> compact_correct(
    const MatSeq& s, const Polynomial& p, const CompactCorrectOptions& opts) {
  if (s.length() < 3)
    throw ValidationError("compact_correct: need at least 3 terms");
  if (classify(p) == Regime::Unsupported)
    throw UnsupportedRegime("compact_correct: unsupported polynomial regime");

  const int L = s.length();
  const int w = effective_window(s, opts.window);
  const EssentialNormEstimate ess = essential_norm(s, w);

  MatSeq corrected = s;
  MatSeq compact;
  compact.tail = s.tail;
  compact.period = s.period;
  compact.terms.resize(static_cast<std::size_t>(L));

  CompactCorrectReport rep;
  rep.window = w;
  rep.essential_before = ess.value;
  rep.terms.resize(static_cast<std::size_t>(L));

  for_each_index(static_cast<std::size_t>(L), opts.jobs, [&](std::size_t k) {
    TermCorrection& tc = rep.terms[k];
    tc.index = static_cast<int>(k) + 1;
    const Mat& term = s.terms[k];
    tc.residual_before = opnorm(eval_poly(p, term));
    const double cap = std::max(ess.value, opnorm(term));
    try {
      StabilizationReport sr = stabilize(term, p, cap, opts.stabilize);
      corrected.terms[k] = sr.output;
      compact.terms[k] = sr.output - term;
      tc.corrected = true;
      tc.correction_norm = opnorm(compact.terms[k]);
      tc.corrected_norm = sr.norm_after;
      tc.residual_after = sr.residual_after;
    } catch (const BasinError& e) {
      corrected.terms[k] = term;
      compact.terms[k] = Mat::Zero(term.rows(), term.cols());
      tc.corrected = false;
      tc.refusal = e.what();
      tc.correction_norm = 0.0;
      tc.corrected_norm = opnorm(term);
      tc.residual_after = tc.residual_before;
    }
  });

  double trailing_norm_max = 0.0;
  double trailing_resid_before_max = 0.0;
  for (int k = 0; k < L; ++k) {
    const TermCorrection& tc = rep.terms[static_cast<std::size_t>(k)];
    if (!tc.corrected) {
      rep.all_corrected = false;
      if (k >= L - w)
        throw OutsideBasin("compact_correct: term " + std::to_string(k + 1) +
                           " in the trailing window refused: " + tc.refusal);
    }
    if (k >= L - w) {
      rep.trailing_max_residual_after =
          std::max(rep.trailing_max_residual_after, tc.residual_after);
      rep.trailing_max_correction =
          std::max(rep.trailing_max_correction, tc.correction_norm);
      trailing_norm_max = std::max(trailing_norm_max, tc.corrected_norm);
      trailing_resid_before_max =
          std::max(trailing_resid_before_max, tc.residual_before);
    }
  }
  rep.essential_after = essential_norm(corrected, w).value;
  rep.essential_norm_drift = std::abs(trailing_norm_max - ess.value);
  if (trailing_resid_before_max > 0.0)
    rep.holder_ratio = rep.trailing_max_correction /
                       std::pow(trailing_resid_before_max, 1.0 / p.degree());
  return {std::move(corrected), std::move(compact), std::move(rep)};
}

std::vector<Mat> lift_projection_family(const std::vector<Mat>& F, double tol) {
  if (F.empty()) throw ValidationError("lift_projection_family: empty family");
  const Eigen::Index n = F.front().rows();
  const int m = static_cast<int>(F.size());
  const Mat I = Mat::Identity(n, n);

  Mat sum = Mat::Zero(n, n);
  for (const Mat& f : F) {
    if (f.rows() != n || f.cols() != n)
      throw DimensionMismatch("lift_projection_family: dimension mismatch");
    const double scale = std::max(1.0, opnorm(f));
    if (opnorm(Mat(f - f.adjoint())) > kHtol * scale)
      throw NotHermitian("lift_projection_family: family member not Hermitian");
    if (opnorm(Mat(f * f - f)) > tol)
      throw ValidationError(
          "lift_projection_family: ||F^2 - F|| exceeds the tolerance");
    sum += f;
  }
  if (opnorm(Mat(sum - I)) > tol)
    throw ValidationError("lift_projection_family: ||sum F - I|| exceeds the "
                          "tolerance");

  Mat A = Mat::Zero(n, n);
  for (int i = 0; i < m; ++i) A += static_cast<double>(i + 1) * F[static_cast<std::size_t>(i)];
  HermitianEig eig = herm_eig(0.5 * (A + Mat(A.adjoint())), 1.0);

  // Cluster the spectrum of A at the integers 1..m.
  std::vector<std::vector<Eigen::Index>> clusters(static_cast<std::size_t>(m));
  for (Eigen::Index j = 0; j < n; ++j) {
    const double v = eig.eigenvalues(j);
    const int nearest = std::clamp(static_cast<int>(std::lround(v)), 1, m);
    if (std::abs(v - nearest) >= 1.0 / 3.0)
      throw ClusterAmbiguous(
          "lift_projection_family: eigenvalue " + std::to_string(v) +
              " of the index form is not within 1/3 of a unique integer",
          Complex(v, 0.0), Complex(nearest, 0.0),
          Complex(v < nearest ? nearest - 1 : nearest + 1, 0.0));
    clusters[static_cast<std::size_t>(nearest - 1)].push_back(j);
  }

  std::vector<Mat> Q(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    Mat acc = Mat::Zero(n, n);
    for (Eigen::Index j : clusters[static_cast<std::size_t>(i)]) {
      const CVec u = eig.eigenvectors.col(j);
      acc += u * u.adjoint();
    }
    Q[static_cast<std::size_t>(i)] = 0.5 * (acc + Mat(acc.adjoint()));
  }
  return Q;
}

MatSeq rfd_compress(const Mat& X, const std::vector<int>& ranks) {
  if (X.rows() != X.cols())
    throw DimensionMismatch("rfd_compress: matrix is not square");
  MatSeq s;
  for (int r : ranks) {
    if (r < 1 || r > X.rows())
      throw ValidationError("rfd_compress: rank " + std::to_string(r) +
                            " out of range");
    s.terms.push_back(X.topLeftCorner(r, r));
  }
  return s;
}

}  // namespace algstab
