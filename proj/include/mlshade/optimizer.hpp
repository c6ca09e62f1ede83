#ifndef MLSHADE_OPTIMIZER_HPP
#define MLSHADE_OPTIMIZER_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "mlshade/cml_crossover.hpp"
#include "mlshade/engine.hpp"
#include "mlshade/problem.hpp"

namespace mlshade {

/// End-of-generation snapshot handed to RunConfig::observer; instrumentation
/// only, never part of the algorithm.
struct GenerationStats {
  int generation;
  std::uint64_t nfes;
  std::size_t pop_size;
  std::array<double, 3> strategy_probs;
  std::array<double, 2> sinusoid_probs;
  std::size_t archive_size;
  std::size_t archive_capacity;
  double best_f;
  double vol;
};

/// Full parameterization of one run. Defaults follow the reference setting;
/// every value can be overridden.
struct RunConfig {
  std::size_t dim = 0;
  std::uint64_t nfes_max = 0;  // 10000 * dim
  std::size_t n_init = 0;      // 18 * dim
  std::size_t n_min = 4;
  std::uint64_t seed = 1;

  std::size_t memory_size = 5;
  double p_c = 0.4;
  double p_s = 0.5;
  double p_best_fraction = 0.11;
  int learning_period = 20;
  double epsilon = 0.01;
  double fixed_freq = 0.5;
  double archive_rate = 2.6;
  double vol_threshold = 0.001;
  double local_search_gate = 0.85;
  double p_ls_init = 0.01;
  double nfes_ls_rate = 0.01;

  bool restart_enabled = true;
  bool local_search_enabled = true;
  std::optional<StrategyKind> forced_strategy;

  bool record_trace = false;
  bool parallel_eval = true;
  std::function<void(const GenerationStats&)> observer;

  static RunConfig for_dim(std::size_t dim);
};

struct TracePoint {
  std::uint64_t nfes;
  double best_f;
};

struct MechanismCounters {
  std::uint64_t restarts = 0;
  std::uint64_t local_searches = 0;
  std::uint64_t cml_uses = 0;
  std::uint64_t cml_fallbacks = 0;
};

struct RunRecord {
  std::vector<double> best_x;
  double best_f = 0.0;
  /// |best_f - known optimum|, reported as exactly 0 at or below 1e-8.
  double error = 0.0;
  std::uint64_t evaluations_used = 0;
  std::uint64_t seed = 0;
  std::vector<TracePoint> trace;
  MechanismCounters counters;
};

/// One full optimization run. Deterministic: (problem, cfg, seed) fixes the
/// record byte for byte. Throws ConfigError for budgets below the
/// initialization cost or mismatched dimensions.
RunRecord run(const Problem& problem, const RunConfig& cfg);

/// Independent runs seeded base_seed + index, executed concurrently when jobs
/// allows; results ordered by run index.
std::vector<RunRecord> run_many(const Problem& problem, const RunConfig& cfg, std::size_t n_runs,
                                std::uint64_t base_seed, int jobs = 1);

}  // namespace mlshade

#endif
