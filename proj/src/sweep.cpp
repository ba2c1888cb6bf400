#include "algstab/sweep.hpp"

#include <cmath>
#include <random>

#include "algstab/errors.hpp"
#include "algstab/matcore.hpp"
#include "algstab/normest.hpp"
#include "algstab/parallel.hpp"
#include "algstab/rng.hpp"

namespace algstab {

std::vector<double> geometric_grid(double lo, double hi, int points) {
  if (!(lo > 0.0) || !(hi >= lo) || points < 1)
    throw ValidationError("geometric_grid: need 0 < lo <= hi and points >= 1");
  std::vector<double> g;
  if (points == 1) {
    g.push_back(lo);
    return g;
  }
  const double step = std::log(hi / lo) / (points - 1);
  for (int i = 0; i < points; ++i) g.push_back(lo * std::exp(step * i));
  return g;
}

std::vector<CurvePoint> run_curve(const Polynomial& p, const CurveConfig& cfg) {
  if (cfg.eps_grid.empty())
    throw ValidationError("run_curve: empty eps grid");
  if (cfg.trials < 1) throw ValidationError("run_curve: trials must be positive");
  if (classify(p) == Regime::Unsupported)
    throw UnsupportedRegime("run_curve: unsupported polynomial regime");
  if (cfg.dim < p.num_roots())
    throw ValidationError("run_curve: dimension below root count");

  const std::size_t total =
      cfg.eps_grid.size() * static_cast<std::size_t>(cfg.trials);
  std::vector<CurvePoint> rows(total);

  for_each_index(total, cfg.jobs, [&](std::size_t idx) {
    const std::size_t ei = idx / static_cast<std::size_t>(cfg.trials);
    const int trial = static_cast<int>(idx % static_cast<std::size_t>(cfg.trials));
    CurvePoint& row = rows[idx];
    row.eps = cfg.eps_grid[ei];
    row.trial = trial;
    try {
      // The trial seed depends only on the trial index: the same solution
      // family is traced across the whole eps grid.
      const std::uint64_t ts = split_seed(cfg.seed, static_cast<std::uint64_t>(trial));
      Mat X0 = sample_exact_solution(p, cfg.dim, ts, cfg.cond_cap);
      const double norm0 = opnorm(X0);
      row.bound = cfg.headroom * std::max(1.0, norm0);

      std::mt19937_64 noise_rng(split_seed(ts, ei + 1));
      Mat G = random_ginibre(cfg.dim, noise_rng);
      G /= opnorm(G);
      Mat X = X0 + row.eps * G;

      StabilizationReport rep = stabilize(X, p, row.bound, cfg.opts);
      row.distance = rep.distance;
      row.residual_before = rep.residual_before;
      row.residual_after = rep.residual_after;
      row.norm_after = rep.norm_after;
    } catch (const std::exception& e) {
      row.refused = true;
      row.refusal = e.what();
    }
  });
  return rows;
}

}  // namespace algstab
