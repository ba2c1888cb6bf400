#include "algstab/lifter.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include <Eigen/QR>

#include "algstab/errors.hpp"
#include "algstab/matcore.hpp"

namespace algstab {

namespace {

constexpr int kCapIterations = 40;

// Orthonormal basis grouped by corner: columns [offset_i, offset_i + size_i)
// span ran(p_i). One QR pass makes the assembled basis unitary to machine
// precision, which is what makes the assembled solution exact.
struct CornerBasis {
  Mat B;
  std::vector<int> offset;
  std::vector<int> size;
};

CornerBasis corner_basis(const SpectralData& sd) {
  const Eigen::Index n = sd.metric.rows();
  CornerBasis cb;
  cb.B = Mat(n, n);
  Eigen::Index col = 0;
  for (const Mat& proj : sd.projections) {
    HermitianEig eig = herm_eig(proj, 1e-6);
    int m = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      if (eig.eigenvalues(i) > 0.5) ++m;
    cb.offset.push_back(static_cast<int>(col));
    cb.size.push_back(m);
    if (m > 0) {
      if (col + m > n)
        throw OutsideBasin("stabilize: projection ranks exceed the dimension");
      cb.B.middleCols(col, m) = eig.eigenvectors.rightCols(m);
      col += m;
    }
  }
  if (col != n)
    throw OutsideBasin("stabilize: projection ranks do not partition the space");
  // Unpivoted QR preserves the span of every column prefix, so the corner
  // grouping survives while the basis becomes unitary to machine precision.
  Eigen::HouseholderQR<Mat> qr(cb.B);
  Mat Q = qr.householderQ();
  cb.B = Q.leftCols(n);
  return cb;
}

struct CornerLegs {
  CornerBasis cb;
  std::vector<Mat> legs;  // nilpotent block per corner (empty when size 0)
};

Mat assemble(const SpectralData& sd, const CornerLegs& cl, const Polynomial& p,
             double theta) {
  const Eigen::Index n = sd.metric.rows();
  Mat blocks = Mat::Zero(n, n);
  for (int i = 0; i < p.num_roots(); ++i) {
    const int m = cl.cb.size[static_cast<std::size_t>(i)];
    if (m == 0) continue;
    const int off = cl.cb.offset[static_cast<std::size_t>(i)];
    blocks.block(off, off, m, m) =
        p.roots()[static_cast<std::size_t>(i)].root * Mat::Identity(m, m) +
        theta * cl.legs[static_cast<std::size_t>(i)];
  }
  Mat cprime = cl.cb.B * blocks * cl.cb.B.adjoint();
  return sd.metric_inv_sqrt * cprime * sd.metric_sqrt;
}

std::pair<Mat, double> cap_legs(const SpectralData& sd, const CornerLegs& cl,
                                const Polynomial& p, double C, double captol) {
  const double bound = C * (1.0 + captol);
  Mat full = assemble(sd, cl, p, 1.0);
  if (opnorm(full) <= bound) return {std::move(full), 1.0};

  Mat skeleton = assemble(sd, cl, p, 0.0);
  const double skel_norm = opnorm(skeleton);
  if (skel_norm > bound)
    throw CapUnreachable(
        "norm_cap: semisimple skeleton has norm " + std::to_string(skel_norm) +
            " > bound " + std::to_string(bound) +
            " (cond_s = " + std::to_string(sd.cond_s) + ")",
        skel_norm, sd.cond_s);

  double lo = 0.0, hi = 1.0;
  Mat best = std::move(skeleton);
  for (int it = 0; it < kCapIterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    Mat trial = assemble(sd, cl, p, mid);
    if (opnorm(trial) <= bound) {
      lo = mid;
      best = std::move(trial);
    } else {
      hi = mid;
    }
  }
  return {std::move(best), lo};
}

void check_common(const Mat& X, const Polynomial& p, double C,
                  const StabilizeOptions& opts, double norm_x) {
  if (!(C > 0.0) || !std::isfinite(C))
    throw ValidationError("stabilize: bound C must be positive");
  for (const auto& rf : p.roots())
    if (std::abs(rf.root) > C)
      throw UnsatisfiableBound(
          "stabilize: root with |root| > C makes the relation unsatisfiable in "
          "spectrum");
  if (norm_x > C * (1.0 + opts.pretol))
    throw OutsideBasin("stabilize: input norm " + std::to_string(norm_x) +
                       " exceeds C(1+pretol)");
  if (X.rows() != X.cols())
    throw DimensionMismatch("stabilize: matrix is not square");
}

StabilizationReport finish_report(const Mat& X, const Polynomial& p, Mat&& out,
                                  double residual_before, double norm_x,
                                  Regime regime, double cond_s, double cap) {
  StabilizationReport rep;
  rep.residual_before = residual_before;
  rep.residual_after = opnorm(eval_poly(p, out));
  rep.distance = opnorm(Mat(X - out));
  rep.norm_before = norm_x;
  rep.norm_after = opnorm(out);
  rep.regime = regime;
  rep.cond_s = cond_s;
  rep.cap_factor = cap;
  rep.output = std::move(out);
  return rep;
}

}  // namespace

ClampFunction::ClampFunction(const Polynomial& p, double C)
    : radius_(p.cluster_radius()), bound_(C) {
  for (const auto& rf : p.roots()) roots_.push_back(rf.root.real());
  std::sort(roots_.begin(), roots_.end());
}

double ClampFunction::operator()(double t) const {
  double v;
  if (t <= roots_.front() + radius_) {
    v = roots_.front();
  } else if (t >= roots_.back() - radius_) {
    v = roots_.back();
  } else {
    v = roots_.back();
    for (std::size_t i = 0; i + 1 < roots_.size(); ++i) {
      if (t <= roots_[i] + radius_) {
        v = roots_[i];
        break;
      }
      const double lo = roots_[i] + radius_, hi = roots_[i + 1] - radius_;
      if (t < hi) {
        const double w = (t - lo) / (hi - lo);
        v = roots_[i] * (1.0 - w) + roots_[i + 1] * w;
        break;
      }
    }
  }
  return std::clamp(v, -bound_, bound_);
}

StabilizationReport stabilize_multiple(const Mat& X, const Polynomial& p, double C,
                                       const StabilizeOptions& opts) {
  if (classify(p) != Regime::AllMultiple)
    throw UnsupportedRegime("stabilize_multiple: regime is not all-multiple");
  const double norm_x = opnorm(X);
  check_common(X, p, C, opts, norm_x);
  const double residual_before = opnorm(eval_poly(p, X));

  SpectralData sd = spectral_data(X, p, opts.stol);
  CornerLegs cl;
  cl.cb = corner_basis(sd);
  const Mat ctilde = cl.cb.B.adjoint() * sd.similarity_image * cl.cb.B;

  ChainOptions copts;
  copts.tau = opts.tau;
  copts.gap_min = opts.gap_min;
  cl.legs.resize(static_cast<std::size_t>(p.num_roots()));
  for (int i = 0; i < p.num_roots(); ++i) {
    const int m = cl.cb.size[static_cast<std::size_t>(i)];
    if (m == 0) continue;
    const int off = cl.cb.offset[static_cast<std::size_t>(i)];
    const int k = p.roots()[static_cast<std::size_t>(i)].multiplicity;
    Mat corner = ctilde.block(off, off, m, m) -
                 p.roots()[static_cast<std::size_t>(i)].root * Mat::Identity(m, m);
    NilChain chain = build_chain(corner, k, copts);
    cl.legs[static_cast<std::size_t>(i)] = truncate_to_nilpotent(corner, k, chain);
  }

  auto [out, theta] = cap_legs(sd, cl, p, C, opts.captol);
  return finish_report(X, p, std::move(out), residual_before, norm_x,
                       Regime::AllMultiple, sd.cond_s, theta);
}

StabilizationReport stabilize_simple_real(const Mat& X, const Polynomial& p,
                                          double C, const StabilizeOptions& opts) {
  if (classify(p) != Regime::AllSimpleReal)
    throw UnsupportedRegime("stabilize_simple_real: regime is not simple-real");
  const double norm_x = opnorm(X);
  check_common(X, p, C, opts, norm_x);

  const double delta = spectral_gap_threshold(p, C);
  const double residual_before = opnorm(eval_poly(p, X));
  if (residual_before > delta)
    throw GapTooWide("stabilize_simple_real: ||p(X)|| = " +
                         std::to_string(residual_before) +
                         " exceeds the spectral inclusion threshold " +
                         std::to_string(delta),
                     residual_before, delta);

  SpectralData sd = spectral_data(X, p, opts.stol);
  const Mat& c = sd.similarity_image;
  Mat Y = 0.5 * (c + Mat(c.adjoint()));
  HermitianEig yeig = herm_eig(Y, 1.0);  // Hermitian by construction

  // The clamp pins the spectrum to the roots only if it starts inside the
  // neighborhoods.
  const double radius = p.cluster_radius();
  for (Eigen::Index i = 0; i < yeig.eigenvalues.size(); ++i) {
    double dist = std::numeric_limits<double>::infinity();
    for (const auto& rf : p.roots())
      dist = std::min(dist, std::abs(yeig.eigenvalues(i) - rf.root.real()));
    if (dist >= radius)
      throw GapTooWide(
          "stabilize_simple_real: spectrum escaped the root neighborhoods "
          "(eigenvalue " +
              std::to_string(yeig.eigenvalues(i)) + ")",
          dist, radius);
  }

  ClampFunction clamp(p, C);
  CVec fd(yeig.eigenvalues.size());
  for (Eigen::Index i = 0; i < fd.size(); ++i)
    fd(i) = clamp(yeig.eigenvalues(i));
  const Mat fY = yeig.eigenvectors * fd.asDiagonal() * yeig.eigenvectors.adjoint();

  // Norm cap on the metric: s_nu = (1-nu) I + nu s interpolates between the
  // Hermitian output (always within the bound) and the fully conjugated one
  // (the fixed point on exact inputs).
  HermitianEig seig = herm_eig(sd.metric);
  auto conjugated = [&](double nu) {
    RVec d = (1.0 - nu) + nu * seig.eigenvalues.array();
    RVec rh = d.array().sqrt();
    RVec rhi = rh.array().inverse();
    Mat shalf = seig.eigenvectors * rh.cast<Complex>().asDiagonal() *
                seig.eigenvectors.adjoint();
    Mat sihalf = seig.eigenvectors * rhi.cast<Complex>().asDiagonal() *
                 seig.eigenvectors.adjoint();
    return Mat(sihalf * fY * shalf);
  };

  const double bound = C * (1.0 + opts.captol);
  double nu = 1.0;
  Mat out = conjugated(1.0);
  if (opnorm(out) > bound) {
    double lo = 0.0, hi = 1.0;
    out = conjugated(0.0);
    if (opnorm(out) > bound)
      throw CapUnreachable(
          "stabilize_simple_real: even the Hermitian output exceeds the bound",
          opnorm(out), sd.cond_s);
    for (int it = 0; it < kCapIterations; ++it) {
      const double mid = 0.5 * (lo + hi);
      Mat trial = conjugated(mid);
      if (opnorm(trial) <= bound) {
        lo = mid;
        out = std::move(trial);
      } else {
        hi = mid;
      }
    }
    nu = lo;
  }

  return finish_report(X, p, std::move(out), residual_before, norm_x,
                       Regime::AllSimpleReal, sd.cond_s, nu);
}

StabilizationReport stabilize(const Mat& X, const Polynomial& p, double C,
                              const StabilizeOptions& opts) {
  switch (classify(p)) {
    case Regime::AllMultiple:
      return stabilize_multiple(X, p, C, opts);
    case Regime::AllSimpleReal:
      return stabilize_simple_real(X, p, C, opts);
    default: {
      bool has_multiple = false, has_simple = false;
      for (const auto& rf : p.roots()) {
        if (rf.multiplicity >= 2) has_multiple = true;
        else has_simple = true;
      }
      if (has_multiple && has_simple)
        throw UnsupportedRegime("unsupported regime: mixed multiplicities");
      throw UnsupportedRegime("unsupported regime: complex simple roots");
    }
  }
}

std::pair<Mat, double> norm_cap(const Mat& Xprime, const Polynomial& p,
                                const SpectralData& sd, double C, double captol) {
  if (classify(p) != Regime::AllMultiple)
    throw UnsupportedRegime("norm_cap: regime is not all-multiple");
  CornerLegs cl;
  cl.cb = corner_basis(sd);
  const Mat cprime =
      cl.cb.B.adjoint() *
      Mat(sd.metric_sqrt * Xprime * sd.metric_inv_sqrt) * cl.cb.B;
  cl.legs.resize(static_cast<std::size_t>(p.num_roots()));
  for (int i = 0; i < p.num_roots(); ++i) {
    const int m = cl.cb.size[static_cast<std::size_t>(i)];
    if (m == 0) continue;
    const int off = cl.cb.offset[static_cast<std::size_t>(i)];
    cl.legs[static_cast<std::size_t>(i)] =
        cprime.block(off, off, m, m) -
        p.roots()[static_cast<std::size_t>(i)].root * Mat::Identity(m, m);
  }
  return cap_legs(sd, cl, p, C, captol);
}

}  // namespace algstab
