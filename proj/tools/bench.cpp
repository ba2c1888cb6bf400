// Compares the serial reference path (jobs = 1) against the OpenMP path for
// the three sweep kernels, and checks that both produce identical results.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "algstab/matcore.hpp"
#include "algstab/normest.hpp"
#include "algstab/parallel.hpp"
#include "algstab/poly.hpp"
#include "algstab/seqmodel.hpp"
#include "algstab/sweep.hpp"

using namespace algstab;

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

struct Timing {
  double serial_ms = 0.0;
  double parallel_ms = 0.0;
  bool identical = false;
};

void print_row(const std::string& name, const Timing& t, int jobs) {
  std::printf("%-18s %10.1f ms %10.1f ms   x%.2f (%d jobs)  results %s\n",
              name.c_str(), t.serial_ms, t.parallel_ms,
              t.serial_ms / t.parallel_ms, jobs,
              t.identical ? "identical" : "DIFFER");
}

Timing bench_curve(int jobs) {
  Polynomial p({{0.0, 2}});
  CurveConfig cfg;
  cfg.dim = 24;
  cfg.eps_grid = geometric_grid(1e-6, 1e-2, 5);
  cfg.trials = 16;
  cfg.seed = 7;

  Timing t;
  cfg.jobs = 1;
  auto t0 = std::chrono::steady_clock::now();
  auto serial = run_curve(p, cfg);
  t.serial_ms = ms_since(t0);

  cfg.jobs = jobs;
  t0 = std::chrono::steady_clock::now();
  auto parallel = run_curve(p, cfg);
  t.parallel_ms = ms_since(t0);

  t.identical = serial.size() == parallel.size();
  for (std::size_t i = 0; t.identical && i < serial.size(); ++i)
    t.identical = serial[i].distance == parallel[i].distance &&
                  serial[i].residual_after == parallel[i].residual_after;
  return t;
}

Timing bench_calkin(int jobs) {
  Polynomial p({{0.0, 2}});
  MatSeq s;
  for (int k = 1; k <= 64; ++k) {
    Mat term = Mat::Zero(12, 12);
    for (int i = 0; i + 1 < 12; i += 2) {
      term(i, i + 1) = 1.0;
      term(i + 1, i) = 1.0 / k;
    }
    s.terms.push_back(term);
  }

  Timing t;
  CompactCorrectOptions opts;
  opts.jobs = 1;
  auto t0 = std::chrono::steady_clock::now();
  auto [ca, kca, ra] = compact_correct(s, p, opts);
  t.serial_ms = ms_since(t0);

  opts.jobs = jobs;
  t0 = std::chrono::steady_clock::now();
  auto [cb, kcb, rb] = compact_correct(s, p, opts);
  t.parallel_ms = ms_since(t0);

  t.identical = true;
  for (std::size_t k = 0; t.identical && k < ca.terms.size(); ++k)
    t.identical = (ca.terms[k] - cb.terms[k]).cwiseAbs().maxCoeff() == 0.0;
  return t;
}

Timing bench_normest(int jobs) {
  Polynomial p({{0.0, 2}});
  NCPoly q = NCPoly::parse("x + x*");
  std::vector<int> dims = {8, 12, 16};

  Timing t;
  auto t0 = std::chrono::steady_clock::now();
  auto serial = estimate_norm(q, p, dims, 64, 11, 1);
  t.serial_ms = ms_since(t0);

  t0 = std::chrono::steady_clock::now();
  auto parallel = estimate_norm(q, p, dims, 64, 11, jobs);
  t.parallel_ms = ms_since(t0);

  t.identical = serial.lower_bound == parallel.lower_bound;
  for (std::size_t i = 0; t.identical && i < serial.per_dim.size(); ++i)
    t.identical = serial.per_dim[i].best == parallel.per_dim[i].best;
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  Eigen::setNbThreads(1);
  const int jobs = argc > 1 ? std::atoi(argv[1]) : hardware_jobs();
  std::printf("kernel                 serial       parallel   speedup\n");
  print_row("curve sweep", bench_curve(jobs), jobs);
  print_row("calkin correct", bench_calkin(jobs), jobs);
  print_row("normest trials", bench_normest(jobs), jobs);
  return 0;
}
