// Timing comparison of the serial reference paths against the OpenMP ones:
// the batch-evaluation kernel and whole independent runs. Results must match
// bit for bit; this prints timings plus a checksum so a mismatch is obvious.

#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mlshade/engine.hpp"
#include "mlshade/optimizer.hpp"
#include "mlshade/problem.hpp"
#include "mlshade/rng.hpp"

using namespace mlshade;

namespace {

double now() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

double checksum(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

void bench_kernel() {
  const std::size_t dim = 100, n = 20000;
  auto problem = make_builtin("rastrigin", dim);
  Rng rng(7);
  std::vector<std::vector<double>> xs(n);
  for (auto& x : xs) {
    x.resize(dim);
    for (auto& v : x) v = rng.uniform(-100.0, 100.0);
  }
  std::vector<double> out_serial(n), out_parallel(n);

  double t0 = now();
  evaluate_batch_serial(*problem, xs, out_serial);
  double t1 = now();
  evaluate_batch(*problem, xs, out_parallel, true);
  double t2 = now();

  bool identical = out_serial == out_parallel;
  std::printf("evaluate_batch  %zu points, D=%zu\n", n, dim);
  std::printf("  serial    %8.1f ms  checksum %.6e\n", (t1 - t0) * 1e3, checksum(out_serial));
  std::printf("  openmp    %8.1f ms  checksum %.6e  speedup %.2fx  identical: %s\n",
              (t2 - t1) * 1e3, checksum(out_parallel), (t1 - t0) / (t2 - t1),
              identical ? "yes" : "NO");
}

void bench_runs() {
  const std::size_t dim = 10, n_runs = 8;
  auto problem = make_builtin("rastrigin", dim);
  RunConfig cfg = RunConfig::for_dim(dim);
  cfg.nfes_max = 20000;
  cfg.parallel_eval = false;  // isolate run-level parallelism

  double t0 = now();
  std::vector<RunRecord> serial = run_many(*problem, cfg, n_runs, 100, 1);
  double t1 = now();
#ifdef _OPENMP
  int jobs = omp_get_max_threads();
#else
  int jobs = 1;
#endif
  std::vector<RunRecord> parallel = run_many(*problem, cfg, n_runs, 100, jobs);
  double t2 = now();

  bool identical = true;
  for (std::size_t i = 0; i < n_runs; ++i)
    identical = identical && serial[i].best_f == parallel[i].best_f &&
                serial[i].best_x == parallel[i].best_x &&
                serial[i].evaluations_used == parallel[i].evaluations_used;

  std::printf("run_many        %zu runs, rastrigin D=%zu, budget %llu\n", n_runs, dim,
              static_cast<unsigned long long>(cfg.nfes_max));
  std::printf("  serial    %8.1f ms\n", (t1 - t0) * 1e3);
  std::printf("  openmp    %8.1f ms  (%d jobs)  speedup %.2fx  identical: %s\n",
              (t2 - t1) * 1e3, jobs, (t1 - t0) / (t2 - t1), identical ? "yes" : "NO");
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads %d\n\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; parallel paths run serially\n\n");
#endif
  bench_kernel();
  std::printf("\n");
  bench_runs();
  return 0;
}
