// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Heavier end-to-end checks live here; unit-level details in
// the per-module tests.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "mlshade/adaptation.hpp"
#include "mlshade/engine.hpp"
#include "mlshade/harness.hpp"
#include "mlshade/linalg.hpp"
#include "mlshade/local_search.hpp"
#include "mlshade/optimizer.hpp"
#include "mlshade/problem.hpp"
#include "mlshade/restart.hpp"
#include "mlshade/rng.hpp"
#include "mlshade/stats.hpp"

using namespace mlshade;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail = "") {
  std::printf("%-4s %2d. %s%s%s\n", pass ? "PASS" : "FAIL", id, name.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::vector<double> errors_of(const std::vector<RunRecord>& records) {
  std::vector<double> e;
  for (const RunRecord& r : records) e.push_back(r.error);
  return e;
}

// --- criterion 1: unimodal convergence -------------------------------------
void criterion_unimodal() {
  bool pass = true;
  std::string detail;
  for (const char* name : {"sphere", "ellipsoid"}) {
    auto problem = make_builtin(name, 10);
    RunConfig cfg = RunConfig::for_dim(10);
    cfg.nfes_max = 100000;
    auto records = run_many(*problem, cfg, 25, 1000, 2);
    int solved = 0;
    for (const RunRecord& r : records)
      if (r.error == 0.0) ++solved;
    detail += std::string(name) + ": " + std::to_string(solved) + "/25 at 0.00E+00  ";
    pass = pass && solved == 25;
  }
  report(1, "unimodal convergence (sphere, ellipsoid; D=10, budget 1e5, 25 runs)", pass, detail);
}

// --- criterion 2: multimodal competence ------------------------------------
void criterion_multimodal() {
  auto problem = make_builtin("rastrigin", 10);
  RunConfig cfg = RunConfig::for_dim(10);
  cfg.nfes_max = 100000;
  auto records = run_many(*problem, cfg, 25, 2000, 2);
  Summary s = summarize(errors_of(records));
  char detail[96];
  std::snprintf(detail, sizeof detail, "median %.3g (threshold 5), mean %.3g", s.median, s.mean);
  report(2, "multimodal competence (rastrigin D=10, 25 runs)", s.median <= 5.0, detail);
}

// --- criterion 3: LPSR schedule ---------------------------------------------
void criterion_lpsr() {
  bool pass = lpsr(180, 4, 0, 100000) == 180 && lpsr(180, 4, 100000, 100000) == 4;

  auto problem = make_builtin("rastrigin", 10);
  RunConfig cfg = RunConfig::for_dim(10);
  cfg.nfes_max = 100000;
  cfg.seed = 17;
  std::size_t prev = cfg.n_init;
  std::size_t final_size = 0;
  bool schedule_ok = true, monotone = true;
  cfg.observer = [&](const GenerationStats& g) {
    std::size_t want =
        lpsr(cfg.n_init, cfg.n_min, std::min<std::uint64_t>(g.nfes, cfg.nfes_max), cfg.nfes_max);
    schedule_ok = schedule_ok && g.pop_size == want;
    monotone = monotone && g.pop_size <= prev;
    prev = g.pop_size;
    final_size = g.pop_size;
  };
  run(*problem, cfg);
  pass = pass && schedule_ok && monotone && final_size == 4 && cfg.n_init == 180;
  char detail[96];
  std::snprintf(detail, sizeof detail, "N(0)=%zu, N(end)=%zu, schedule %s", cfg.n_init,
                final_size, schedule_ok && monotone ? "exact+monotone" : "violated");
  report(3, "LPSR schedule 18*D -> 4 over a full instrumented run", pass, detail);
}

// --- criterion 4: weighted-F branch constants --------------------------------
void criterion_weighted_f() {
  auto near = [](double a, double b) { return std::abs(a - b) < 1e-15; };
  bool pass = true;
  pass = pass && near(weighted_f(0.5, 0, 1000), 0.35);
  pass = pass && near(weighted_f(0.5, 200, 1000), 0.35);
  pass = pass && near(weighted_f(0.5, 201, 1000), 0.40);
  pass = pass && near(weighted_f(0.5, 400, 1000), 0.40);
  pass = pass && near(weighted_f(0.5, 401, 1000), 0.60);
  pass = pass && near(weighted_f(0.5, 1000, 1000), 0.60);
  pass = pass && near(weighted_f(1.0, 100000, 1000000), 0.7);
  pass = pass && near(weighted_f(1.0, 999999, 1000000), 1.2);
  report(4, "weighted-F multipliers 0.7/0.8/1.2 at the 0.2/0.4 breakpoints", pass);
}

// --- criterion 5: strategy probabilities stay clamped ------------------------
void criterion_strategy_probs() {
  bool pass = true;
  std::uint64_t generations = 0;
  for (const char* name : {"sphere", "rastrigin", "ackley"}) {
    auto problem = make_builtin(name, 10);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      RunConfig cfg = RunConfig::for_dim(10);
      cfg.nfes_max = 20000;
      cfg.seed = seed;
      cfg.observer = [&](const GenerationStats& g) {
        ++generations;
        for (double p : g.strategy_probs)
          pass = pass && p >= 0.1 && p <= 0.9;
      };
      run(*problem, cfg);
    }
  }
  report(5, "strategy probabilities within [0.1, 0.9] (5 seeds x 3 problems)", pass,
         std::to_string(generations) + " generations checked");
}

// --- criterion 6: eigendecomposition quality ---------------------------------
void criterion_eigen() {
  Rng rng(606);
  bool pass = true;
  double worst_recon = 0.0, worst_ortho = 0.0;
  for (std::size_t d : {2, 10, 30}) {
    for (int rep = 0; rep < 100; ++rep) {
      Matrix a(d, d);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) a(i, j) = rng.uniform(-100.0, 100.0);
      SymmetricMatrix c(a);
      EigenDecomposition dec = eigen_symmetric(c);

      double diff = 0.0, norm = 0.0, ortho = 0.0;
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
          double recon = 0.0, dot = 0.0;
          for (std::size_t k = 0; k < d; ++k) {
            recon += dec.eigenvectors(i, k) * dec.eigenvalues[k] * dec.eigenvectors(j, k);
            dot += dec.eigenvectors(i, k) * dec.eigenvectors(j, k);
          }
          diff += (recon - c(i, j)) * (recon - c(i, j));
          norm += c(i, j) * c(i, j);
          ortho = std::max(ortho, std::abs(dot - (i == j ? 1.0 : 0.0)));
        }
      double rel = std::sqrt(diff / norm);
      worst_recon = std::max(worst_recon, rel);
      worst_ortho = std::max(worst_ortho, ortho);
      pass = pass && rel < 1e-9 && ortho < 1e-10;
    }
  }
  char detail[96];
  std::snprintf(detail, sizeof detail, "worst reconstruction %.2e, worst orthonormality %.2e",
                worst_recon, worst_ortho);
  report(6, "eigendecomposition reconstruction 1e-9 / orthonormality 1e-10", pass, detail);
}

// --- criterion 7: Wilcoxon exact branch vs enumeration oracle ----------------
double oracle_exact_p(const std::vector<double>& d) {
  const std::size_t n = d.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return std::abs(d[i]) < std::abs(d[j]);
  });
  std::vector<double> rank(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && std::abs(d[order[j + 1]]) == std::abs(d[order[i]])) ++j;
    double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
    i = j + 1;
  }
  double w_obs = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    if (d[k] > 0) w_obs += rank[k];
  const double mu = static_cast<double>(n) * (static_cast<double>(n) + 1.0) / 4.0;
  std::uint64_t hits = 0;
  for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
    double w = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      if (mask & (1ULL << k)) w += rank[k];
    if (std::abs(w - mu) >= std::abs(w_obs - mu)) ++hits;
  }
  return static_cast<double>(hits) / std::ldexp(1.0, static_cast<int>(n));
}

void criterion_wilcoxon() {
  Rng rng(707);
  bool pass = true;
  double worst = 0.0;
  int cases = 0;
  for (std::size_t n = 5; n <= 12; ++n) {
    for (int rep = 0; rep < 13; ++rep) {
      std::vector<double> d(n), zero(n, 0.0);
      for (auto& v : d) {
        v = static_cast<double>(1 + rng.uniform_index(5));
        if (rng.uniform01() < 0.5) v = -v;
      }
      WilcoxonResult r = wilcoxon_signed_rank(d, zero, 0.05);
      double gap = std::abs(r.p_value - oracle_exact_p(d));
      worst = std::max(worst, gap);
      pass = pass && gap < 1e-12;
      ++cases;
    }
  }
  char detail[64];
  std::snprintf(detail, sizeof detail, "%d cases, worst gap %.2e", cases, worst);
  report(7, "Wilcoxon exact p agrees with the 2^n enumeration oracle (n<=12)", pass, detail);
}

// --- criterion 8: restart guard ----------------------------------------------
void criterion_restart() {
  auto problem = make_builtin("rastrigin", 4);
  Rng rng(808);
  auto build_pop = [&] {
    Population pop;
    for (int i = 0; i < 10; ++i) {
      std::vector<double> x(4);
      for (auto& v : x) v = 3.0 + rng.uniform(-1e-5, 1e-5);
      double f = (*problem)(x);
      pop.members.push_back({std::move(x), f});
    }
    return pop;
  };

  Population pop = build_pop();
  StagnationTracker tracker(10, 4);
  tracker.counters.assign(10, 9);  // all past 2*D = 8
  tracker.vol = 1e-6;
  Archive archive(32, Rng(1));
  RestartOutcome fired = apply_restart(pop, tracker, archive, *problem, rng, 1000);

  Population calm = build_pop();
  StagnationTracker tracker2(10, 4);
  tracker2.counters.assign(10, 9);
  tracker2.vol = 0.5;  // healthy volume: guard must not fire
  Population before = calm;
  RestartOutcome skipped = apply_restart(calm, tracker2, archive, *problem, rng, 1000);
  bool untouched = skipped.replaced == 0;
  for (std::size_t i = 0; i < calm.size(); ++i)
    untouched = untouched && calm.members[i].x == before.members[i].x;

  bool pass = fired.replaced == 9 && untouched;
  char detail[96];
  std::snprintf(detail, sizeof detail, "stagnant: %d/9 non-best replaced; healthy: %s",
                fired.replaced, untouched ? "untouched" : "MODIFIED");
  report(8, "restart guard (count > 2*D and Vol < 0.001, best exempt)", pass, detail);
}

// --- criterion 9: local search on a convex quadratic --------------------------
void criterion_local_search() {
  const std::size_t d = 10;
  FunctionProblem quad("quad", Bounds::uniform(d, -100.0, 100.0), std::nullopt,
                       [](std::span<const double> x) {
                         double s = 0.0;
                         for (std::size_t i = 0; i < x.size(); ++i)
                           s += (1.0 + static_cast<double>(i)) * x[i] * x[i];
                         return s;
                       });
  Rng rng(909);
  bool pass = true;
  double worst_g = 0.0;
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<double> x0(d);
    for (auto& v : x0) v = rng.uniform(-50.0, 50.0);
    double f0 = quad(x0);
    QnResult res = bounded_quasi_newton(quad, x0, 500);
    double g_norm = 0.0;
    for (std::size_t i = 0; i < d; ++i)
      g_norm = std::max(g_norm, std::abs(2.0 * (1.0 + static_cast<double>(i)) * res.x[i]));
    worst_g = std::max(worst_g, g_norm);
    pass = pass && res.evaluations <= 500 && res.f <= f0 && g_norm < 1e-6;
  }
  char detail[64];
  std::snprintf(detail, sizeof detail, "worst gradient norm %.2e", worst_g);
  report(9, "quasi-Newton: gradient < 1e-6 within 500 evals, monotone", pass, detail);
}

// --- criterion 10: harness determinism ----------------------------------------
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion_determinism() {
  fs::path out1 = fs::temp_directory_path() / "mlshade_acc_det1";
  fs::path out2 = fs::temp_directory_path() / "mlshade_acc_det2";
  fs::remove_all(out1);
  fs::remove_all(out2);

  std::string base = std::string(MLSHADE_CLI_PATH) +
                     " run --problem sphere --problem rastrigin --dim 8 --runs 4"
                     " --seed 5 --budget 20000 --jobs 2 --out ";
  int rc1 = std::system((base + out1.string() + " > /dev/null").c_str());
  int rc2 = std::system((base + out2.string() + " > /dev/null").c_str());

  bool pass = rc1 == 0 && rc2 == 0;
  std::string detail;
  if (pass) {
    std::string a = slurp(out1 / "results.csv");
    std::string b = slurp(out2 / "results.csv");
    std::string ra = slurp(out1 / "records.jsonl");
    std::string rb = slurp(out2 / "records.jsonl");
    pass = !a.empty() && a == b && !ra.empty() && ra == rb;
    detail = pass ? "results.csv and records.jsonl byte-identical" : "outputs differ";
  } else {
    detail = "CLI exited nonzero";
  }
  report(10, "two CLI executions produce byte-identical CSV outputs", pass, detail);
}

// --- criterion 11: invariants under fuzzed configs -----------------------------
void criterion_invariants() {
  Rng fuzz(1111);
  bool pass = true;
  std::string detail;
  for (int rep = 0; rep < 10; ++rep) {
    std::size_t dim = 4 + fuzz.uniform_index(7);  // 4..10
    std::atomic<std::uint64_t> evals{0};
    std::atomic<int> violations{0};
    Bounds bounds = Bounds::uniform(dim, -100.0, 100.0);
    FunctionProblem guard("guarded", bounds, 0.0, [&](std::span<const double> x) {
      evals.fetch_add(1, std::memory_order_relaxed);
      double s = 0.0;
      for (double v : x) {
        if (v < -100.0 || v > 100.0) violations.fetch_add(1, std::memory_order_relaxed);
        s += v * v - std::cos(3.0 * v);
      }
      return s + static_cast<double>(x.size());
    });

    RunConfig cfg = RunConfig::for_dim(dim);
    cfg.nfes_max = 5000 + fuzz.uniform_index(15000);
    cfg.seed = 10000 + static_cast<std::uint64_t>(rep);
    cfg.p_c = fuzz.uniform01() < 0.3 ? 0.0 : 0.4;
    cfg.restart_enabled = fuzz.uniform01() < 0.8;
    cfg.local_search_enabled = fuzz.uniform01() < 0.8;
    cfg.record_trace = true;

    bool archive_ok = true;
    std::size_t entering = cfg.n_init, last_entering = cfg.n_init;
    cfg.observer = [&](const GenerationStats& g) {
      archive_ok = archive_ok && g.archive_size <= g.archive_capacity;
      last_entering = entering;
      entering = g.pop_size;
    };
    RunRecord rec = run(guard, cfg);

    bool monotone = true;
    for (std::size_t i = 1; i < rec.trace.size(); ++i)
      monotone = monotone && rec.trace[i].best_f <= rec.trace[i - 1].best_f;

    bool ok = violations.load() == 0 && archive_ok && monotone &&
              evals.load() == rec.evaluations_used &&
              rec.evaluations_used <= cfg.nfes_max + last_entering;
    if (!ok && detail.empty())
      detail = "failed at rep " + std::to_string(rep) + " (dim " + std::to_string(dim) + ")";
    pass = pass && ok;
  }
  report(11, "invariants: monotone best, in-bounds evals, archive cap, budget", pass, detail);
}

}  // namespace

int main() {
  std::printf("acceptance suite\n----------------\n");
  criterion_unimodal();
  criterion_multimodal();
  criterion_lpsr();
  criterion_weighted_f();
  criterion_strategy_probs();
  criterion_eigen();
  criterion_wilcoxon();
  criterion_restart();
  criterion_local_search();
  criterion_determinism();
  criterion_invariants();
  std::printf("----------------\n%s (%d failure%s)\n", failures == 0 ? "ALL PASS" : "FAILED",
              failures, failures == 1 ? "" : "s");
  return failures == 0 ? 0 : 1;
}
