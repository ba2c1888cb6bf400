#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace algstab {

inline int hardware_jobs() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

// Index-parallel map. jobs == 1 is the serial reference path; jobs == 0
// means "all hardware threads". Bodies must write only to their own slot so
// results do not depend on scheduling; every caller in this project derives
// per-index RNG seeds, which keeps serial and parallel runs bit-identical.
template <typename Body>
void for_each_index(std::size_t n, int jobs, Body&& body) {
  if (jobs == 0) jobs = hardware_jobs();
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
  for (long long i = 0; i < static_cast<long long>(n); ++i)
    body(static_cast<std::size_t>(i));
#else
  for (std::size_t i = 0; i < n; ++i) body(i);
#endif
}

}  // namespace algstab
