#include "algstab/normest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>
#include <stdexcept>

#include "algstab/errors.hpp"
#include "algstab/matcore.hpp"
#include "algstab/parallel.hpp"
#include "algstab/rng.hpp"

namespace algstab {

NCPoly NCPoly::parse(std::string_view text) {
  NCPoly q;
  std::size_t i = 0;
  const auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_ws();
  if (i == text.size()) throw ValidationError("ncpoly: empty expression");

  bool first = true;
  while (i < text.size()) {
    double sign = 1.0;
    skip_ws();
    if (text[i] == '+' || text[i] == '-') {
      sign = text[i] == '-' ? -1.0 : 1.0;
      ++i;
    } else if (!first) {
      throw ValidationError("ncpoly: expected '+' or '-' between terms");
    }
    skip_ws();
    NCTerm term;
    term.coeff = Complex(sign, 0.0);

    // Optional numeric coefficient. A '*' right after it is a product sign;
    // the adjoint star only ever follows a letter.
    if (i < text.size() &&
        (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.')) {
      std::size_t used = 0;
      const double v = std::stod(std::string(text.substr(i)), &used);
      term.coeff *= v;
      i += used;
      skip_ws();
      if (i < text.size() && text[i] == '*') {
        ++i;
        skip_ws();
      }
    }

    // Letters.
    while (i < text.size()) {
      skip_ws();
      if (i >= text.size() || (text[i] != 'x' && text[i] != 'X')) break;
      ++i;
      if (i < text.size() && text[i] == '*') {
        term.word.push_back(Letter::XAdj);
        ++i;
      } else {
        term.word.push_back(Letter::X);
      }
    }
    skip_ws();
    if (i < text.size() && text[i] != '+' && text[i] != '-')
      throw ValidationError(std::string("ncpoly: unexpected character '") +
                            text[i] + "'");
    q.terms.push_back(std::move(term));
    first = false;
  }
  return q;
}

double NCPoly::coeff_bound() const {
  double b = 0.0;
  for (const auto& t : terms) b += std::abs(t.coeff);
  return b;
}

std::string NCPoly::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i) out += " + ";
    out += "(" + std::to_string(terms[i].coeff.real()) + ")";
    for (Letter l : terms[i].word) out += l == Letter::X ? " x" : " x*";
  }
  return out;
}

Mat eval_ncpoly(const NCPoly& q, const Mat& X) {
  if (X.rows() != X.cols())
    throw DimensionMismatch("eval_ncpoly: matrix is not square");
  const Eigen::Index n = X.rows();
  const Mat Xa = X.adjoint();
  Mat acc = Mat::Zero(n, n);
  for (const auto& t : q.terms) {
    Mat w = Mat::Identity(n, n);
    for (Letter l : t.word) w = w * (l == Letter::X ? X : Xa);
    acc += t.coeff * w;
  }
  return acc;
}

namespace {

// Random composition of dim into one block per root, each >= 1 and, for
// multiple roots, preferring at least multiplicity slots so the nilpotent
// leg can reach full order.
std::vector<int> random_split(const Polynomial& p, int dim, std::mt19937_64& rng) {
  const int n = p.num_roots();
  std::vector<int> want(static_cast<std::size_t>(n), 1);
  int used = n;
  for (int i = 0; i < n; ++i) {
    const int k = p.roots()[static_cast<std::size_t>(i)].multiplicity;
    const int extra = std::min(k - 1, dim - used);
    want[static_cast<std::size_t>(i)] += extra;
    used += extra;
  }
  std::uniform_int_distribution<int> pick(0, n - 1);
  while (used < dim) {
    want[static_cast<std::size_t>(pick(rng))] += 1;
    ++used;
  }
  return want;
}

}  // namespace

Mat sample_exact_solution(const Polynomial& p, int dim, std::uint64_t seed,
                          double cond_cap) {
  if (dim < p.num_roots())
    throw ValidationError("sample_exact_solution: dimension below root count");
  if (classify(p) == Regime::Unsupported)
    throw UnsupportedRegime("sample_exact_solution: unsupported regime");
  std::mt19937_64 rng(seed);

  const std::vector<int> sizes = random_split(p, dim, rng);
  Mat U = random_unitary(dim, rng);

  Mat blocks = Mat::Zero(dim, dim);
  int off = 0;
  for (int i = 0; i < p.num_roots(); ++i) {
    const auto& rf = p.roots()[static_cast<std::size_t>(i)];
    const int m = sizes[static_cast<std::size_t>(i)];
    blocks.block(off, off, m, m) = rf.root * Mat::Identity(m, m);
    if (rf.multiplicity >= 2 && m >= 2)
      blocks.block(off, off, m, m) +=
          random_staircase_nilpotent(m, rf.multiplicity, rng);
    off += m;
  }
  Mat X0 = U * blocks * U.adjoint();

  if (cond_cap > 1.0) {
    std::uniform_real_distribution<double> u(1.0, cond_cap);
    Mat S = random_psd_with_cond(dim, u(rng), rng);
    Mat sh = psd_sqrt(S), shi = psd_inv_sqrt(S);
    X0 = shi * X0 * sh;
  }
  return X0;
}

RepSample sample_representation(const Polynomial& p, int dim, std::uint64_t seed,
                                double cond_cap) {
  for (const auto& rf : p.roots())
    if (std::abs(rf.root) > 1.0)
      throw UnsatisfiableBound(
          "sample_representation: |root| > 1 has no representation in the unit "
          "ball");
  if (classify(p) == Regime::Unsupported)
    throw UnsupportedRegime("sample_representation: unsupported regime");
  if (dim < p.num_roots())
    throw ValidationError("sample_representation: dimension below root count");

  std::mt19937_64 rng(seed);
  const std::vector<int> sizes = random_split(p, dim, rng);
  Mat U = random_unitary(dim, rng);

  // Semisimple skeleton and nilpotent legs, kept separate so the legs can be
  // contracted without touching exactness.
  Mat skel = Mat::Zero(dim, dim);
  Mat legs = Mat::Zero(dim, dim);
  int off = 0;
  for (int i = 0; i < p.num_roots(); ++i) {
    const auto& rf = p.roots()[static_cast<std::size_t>(i)];
    const int m = sizes[static_cast<std::size_t>(i)];
    skel.block(off, off, m, m) = rf.root * Mat::Identity(m, m);
    if (rf.multiplicity >= 2 && m >= 2) {
      // Over-scaled on purpose; the contraction below lands on the sphere.
      legs.block(off, off, m, m) =
          2.0 * random_staircase_nilpotent(m, rf.multiplicity, rng);
    }
    off += m;
  }
  skel = U * skel * U.adjoint();
  legs = U * legs * U.adjoint();

  double rho = 0.0;  // spectral radius of any sample, = max |root| present
  for (const auto& rf : p.roots()) rho = std::max(rho, std::abs(rf.root));

  // A root on the unit sphere leaves no room for oblique similarity: a unit
  // eigenvector of a contraction at a unit eigenvalue spans a reducing
  // subspace, so cross-corner conjugation would push the norm past 1.
  Mat sh = Mat::Identity(dim, dim), shi = sh;
  if (cond_cap > 1.0 && rho < 1.0 - 1e-9) {
    std::uniform_real_distribution<double> u(1.0, cond_cap);
    // Shrink the similarity until the conjugated skeleton fits in the ball;
    // nu = 0 is the orthogonal resolution itself, which always fits.
    Mat S = random_psd_with_cond(dim, u(rng), rng);
    const Mat I = Mat::Identity(dim, dim);
    double nu = 1.0;
    for (int it = 0; it < 60; ++it) {
      Mat Snu = (1.0 - nu) * I + nu * S;
      sh = psd_sqrt(Snu);
      shi = psd_inv_sqrt(Snu);
      if (opnorm(Mat(shi * skel * sh)) <= 1.0 - 0.5 * (1.0 - rho)) break;
      nu *= 0.5;
      if (it == 59) {
        sh = I;
        shi = I;
      }
    }
  }

  const Mat base = shi * skel * sh;
  const Mat leg = shi * legs * sh;

  RepSample sample;
  sample.dim = dim;
  sample.seed = seed;
  double theta = 1.0;
  if (opnorm(Mat(base + leg)) <= 1.0) {
    sample.X = base + leg;
  } else {
    double lo = 0.0, hi = 1.0;
    Mat best = base;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      Mat trial = base + mid * leg;
      if (opnorm(trial) <= 1.0) {
        lo = mid;
        best = std::move(trial);
      } else {
        hi = mid;
      }
    }
    theta = lo;
    sample.X = std::move(best);
  }
  sample.theta = theta;
  sample.relation_residual = opnorm(eval_poly(p, sample.X));
  sample.norm = opnorm(sample.X);
  if (sample.relation_residual > 1e-10)
    throw Error("sample_representation: construction lost exactness");
  if (sample.norm > 1.0 + 1e-12)
    throw Error("sample_representation: construction exceeded the unit ball");
  return sample;
}

NormEstimate estimate_norm(const NCPoly& q, const Polynomial& p,
                           const std::vector<int>& dims, int trials,
                           std::uint64_t seed, int jobs, double cond_cap) {
  if (trials < 1) throw ValidationError("estimate_norm: trials must be positive");
  NormEstimate est;
  est.per_dim.resize(dims.size());

  const double free_bound = q.coeff_bound();
  for (std::size_t di = 0; di < dims.size(); ++di) {
    const int dim = dims[di];
    DimEstimate& de = est.per_dim[di];
    de.dim = dim;
    de.trials = trials;
    std::vector<double> values(static_cast<std::size_t>(trials), 0.0);
    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(trials), 0);
    std::vector<std::string> failures(static_cast<std::size_t>(trials));
    for_each_index(static_cast<std::size_t>(trials), jobs, [&](std::size_t t) {
      try {
        const std::uint64_t ts =
            split_seed(seed, static_cast<std::uint64_t>(dim), t);
        seeds[t] = ts;
        // Every fourth trial skips the similarity; orthogonal-resolution
        // witnesses are where several extremal values live.
        const double cap = (t % 4 == 0) ? 1.0 : cond_cap;
        RepSample sample = sample_representation(p, dim, ts, cap);
        values[t] = opnorm(eval_ncpoly(q, sample.X));
      } catch (const std::exception& e) {
        failures[t] = e.what();
      }
    });
    for (const std::string& f : failures)
      if (!f.empty()) throw Error("estimate_norm: " + f);
    for (std::size_t t = 0; t < values.size(); ++t) {
      if (values[t] > de.best) {
        de.best = values[t];
        de.argmax_seed = seeds[t];
      }
    }
    if (de.best > free_bound + 1e-9)
      throw Error("estimate_norm: sample exceeded the free coefficient bound; "
                  "this indicates a defect in the sampler");
    est.lower_bound = std::max(est.lower_bound, de.best);
  }
  return est;
}

}  // namespace algstab
