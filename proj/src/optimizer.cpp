#include "mlshade/optimizer.hpp"

#include <algorithm>
#include <cmath>

#include "mlshade/adaptation.hpp"
#include "mlshade/errors.hpp"
#include "mlshade/local_search.hpp"
#include "mlshade/restart.hpp"

namespace mlshade {

namespace {

// Sub-stream ids of the per-run root stream.
enum Stream : std::uint64_t {
  kInit = 0,
  kAdaptation,
  kMutation,
  kCrossover,
  kRestart,
  kLocalSearch,
  kArchive,
};

std::size_t archive_capacity_for(double rate, std::size_t np) {
  return std::max<std::size_t>(
      1, static_cast<std::size_t>(std::lround(rate * static_cast<double>(np))));
}

void sort_with_counters(Population& pop, StagnationTracker& tracker) {
  std::vector<std::size_t> order = pop.sort_by_fitness();
  std::vector<int> counters(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) counters[k] = tracker.counters[order[k]];
  tracker.counters = std::move(counters);
}

}  // namespace

RunConfig RunConfig::for_dim(std::size_t dim) {
  RunConfig cfg;
  cfg.dim = dim;
  cfg.nfes_max = 10000 * static_cast<std::uint64_t>(dim);
  cfg.n_init = 18 * dim;
  return cfg;
}

RunRecord run(const Problem& problem, const RunConfig& cfg) {
  if (cfg.dim == 0 || problem.dim() != cfg.dim)
    throw ConfigError("run: config dimension does not match the problem");
  if (cfg.n_min < 4) throw ConfigError("run: minimum population size is 4");
  if (cfg.n_init < cfg.n_min) throw ConfigError("run: n_init below n_min");
  if (cfg.nfes_max < cfg.n_init)
    throw ConfigError("run: budget smaller than the initialization cost");

  const Bounds& bounds = problem.bounds();
  Rng root(cfg.seed);
  Rng init_rng = root.fork(kInit);
  Rng adapt_rng = root.fork(kAdaptation);
  Rng mut_rng = root.fork(kMutation);
  Rng cross_rng = root.fork(kCrossover);
  Rng restart_rng = root.fork(kRestart);
  Rng ls_rng = root.fork(kLocalSearch);

  Population pop = initialize_population(problem, cfg.n_init, init_rng, cfg.parallel_eval);
  std::uint64_t nfes = cfg.n_init;

  Archive archive(archive_capacity_for(cfg.archive_rate, cfg.n_init), root.fork(kArchive));
  for (const Individual& ind : pop.members) archive.insert(ind.x);

  ParameterMemory memory(cfg.memory_size);
  SinusoidSelector selector;
  selector.learning_period = cfg.learning_period;
  selector.epsilon = cfg.epsilon;
  StrategyState strategies;
  StagnationTracker tracker(cfg.n_init, cfg.dim);
  tracker.vol_threshold = cfg.vol_threshold;
  LocalSearchState ls_state;
  ls_state.p_ls = cfg.p_ls_init;
  ls_state.active_after = cfg.local_search_gate;
  ls_state.budget_per_invocation = static_cast<std::uint64_t>(
      std::llround(cfg.nfes_ls_rate * static_cast<double>(cfg.nfes_max)));

  const CmlConfig cml_cfg{cfg.p_c, cfg.p_s};
  // The sinusoidal formulas need a generation horizon; LPSR makes the true
  // count unknowable up front, so the schedule length is pinned at start.
  const double g_max =
      static_cast<double>(cfg.nfes_max) / static_cast<double>(cfg.n_init);

  RunRecord record;
  record.seed = cfg.seed;

  Individual best = pop.best();
  if (cfg.record_trace) record.trace.push_back({nfes, best.fitness});

  sort_with_counters(pop, tracker);

  int generation = 0;
  while (nfes < cfg.nfes_max) {
    ++generation;
    pop.generation = generation;
    const std::size_t np = pop.size();

    // --- trial generation (population snapshot is sorted ascending) ---
    std::vector<StrategyKind> kinds =
        cfg.forced_strategy
            ? std::vector<StrategyKind>(np, *cfg.forced_strategy)
            : assign_strategies(strategies, np, adapt_rng);

    std::vector<double> fs(np), fws(np), crs(np), freqs(np);
    std::vector<FSource> sources(np);
    std::vector<std::vector<double>> trials(np);
    std::optional<EigenDecomposition> basis;
    bool basis_ready = false;

    for (std::size_t i = 0; i < np; ++i) {
      FSample sample = sample_f(memory, selector, generation, g_max, cfg.fixed_freq, adapt_rng);
      fs[i] = sample.f;
      sources[i] = sample.source;
      freqs[i] = sample.freq;
      crs[i] = sample_cr(memory, adapt_rng);
      fws[i] = weighted_f(fs[i], nfes, cfg.nfes_max);

      std::vector<double> mutant = mutate(kinds[i], i, pop, archive, fs[i], fws[i],
                                          cfg.p_best_fraction, bounds, mut_rng);
      if (choose_crossover(cml_cfg, cross_rng) == CrossoverKind::cml) {
        if (!basis_ready) {
          basis = neighborhood_basis(pop, cfg.p_s);  // cached for the generation
          basis_ready = true;
        }
        if (basis) {
          trials[i] = cml_crossover_with_basis(pop.members[i].x, mutant, crs[i], *basis, bounds,
                                               cross_rng);
          ++record.counters.cml_uses;
        } else {
          trials[i] = binomial_crossover(pop.members[i].x, mutant, crs[i], cross_rng);
          ++record.counters.cml_fallbacks;
        }
      } else {
        trials[i] = binomial_crossover(pop.members[i].x, mutant, crs[i], cross_rng);
      }
    }

    std::vector<double> trial_f(np);
    evaluate_batch(problem, trials, trial_f, cfg.parallel_eval);
    nfes += np;

    // --- selection, success bookkeeping ---
    std::vector<double> old_f(np);
    for (std::size_t i = 0; i < np; ++i) old_f[i] = pop.members[i].fitness;

    std::vector<double> s_f, s_cr, gains, s_freq, freq_gains;
    std::array<int, 2> sin_success{0, 0}, sin_failure{0, 0};
    for (std::size_t i = 0; i < np; ++i) {
      bool improved =
          select(pop.members[i], Individual{std::move(trials[i]), trial_f[i]}, archive);
      if (sources[i] != FSource::cauchy) {
        std::size_t j = sources[i] == FSource::sinusoid1 ? 0 : 1;
        (improved ? sin_success : sin_failure)[j] += 1;
      }
      if (improved) {
        double gain = old_f[i] - trial_f[i];
        s_f.push_back(fs[i]);
        s_cr.push_back(crs[i]);
        gains.push_back(gain);
        if (sources[i] == FSource::sinusoid2) {
          s_freq.push_back(freqs[i]);
          freq_gains.push_back(gain);
        }
        if (trial_f[i] < best.fitness) best = pop.members[i];
      }
    }

    record_counters(tracker, trial_f, old_f);
    update_memories(memory, s_f, s_cr, gains, s_freq, freq_gains);
    if (!cfg.forced_strategy) {
      std::vector<double> new_f(np);
      for (std::size_t i = 0; i < np; ++i) new_f[i] = pop.members[i].fitness;
      update_strategy_probs(strategies, old_f, new_f, kinds);
    }
    if (static_cast<double>(generation) <= g_max / 2.0) {
      selector.record_generation(sin_success, sin_failure);
      update_sinusoid_selector(selector, generation);
    }

    sort_with_counters(pop, tracker);

    // --- diversity, restart ---
    tracker.vol = volume_metric(pop, bounds);
    if (cfg.restart_enabled) {
      std::uint64_t room = cfg.nfes_max > nfes ? cfg.nfes_max - nfes : 0;
      RestartOutcome outcome =
          apply_restart(pop, tracker, archive, problem, restart_rng, room);
      nfes += outcome.evaluations;
      record.counters.restarts += static_cast<std::uint64_t>(outcome.replaced);
      if (outcome.replaced > 0) {
        for (const Individual& ind : pop.members)
          if (ind.fitness < best.fitness) best = ind;
        sort_with_counters(pop, tracker);
      }
    }

    // --- late-phase local search on the incumbent best ---
    if (cfg.local_search_enabled &&
        static_cast<double>(nfes) >= ls_state.active_after * static_cast<double>(cfg.nfes_max)) {
      LocalSearchOutcome outcome =
          maybe_local_search(best, problem, ls_state, nfes, cfg.nfes_max, ls_rng);
      nfes += outcome.evaluations;
      if (outcome.evaluations > 0) ++record.counters.local_searches;
      if (outcome.refined) {
        best = *outcome.refined;
        pop.members[0] = *outcome.refined;  // population is sorted; slot 0 is the best
        tracker.counters[0] = 0;
      }
    }

    // --- linear population size reduction, end of the generation ---
    std::size_t target_np =
        lpsr(cfg.n_init, cfg.n_min, std::min(nfes, cfg.nfes_max), cfg.nfes_max);
    if (target_np < pop.size()) {
      sort_with_counters(pop, tracker);
      pop.members.resize(target_np);
      tracker.counters.resize(target_np);
      archive.set_capacity(archive_capacity_for(cfg.archive_rate, target_np));
    }

    if (cfg.record_trace) record.trace.push_back({nfes, best.fitness});
    if (cfg.observer) {
      cfg.observer(GenerationStats{generation, nfes, pop.size(), strategies.probs,
                                   selector.probs, archive.size(), archive.capacity(),
                                   best.fitness, tracker.vol});
    }
  }

  record.best_x = best.x;
  record.best_f = best.fitness;
  record.evaluations_used = nfes;
  if (problem.known_optimum()) {
    double err = std::abs(best.fitness - *problem.known_optimum());
    record.error = err <= 1e-8 ? 0.0 : err;
  } else {
    record.error = best.fitness;
  }
  return record;
}

std::vector<RunRecord> run_many(const Problem& problem, const RunConfig& cfg, std::size_t n_runs,
                                std::uint64_t base_seed, int jobs) {
  if (n_runs == 0) throw ConfigError("run_many: need at least one run");
  std::vector<RunRecord> records(n_runs);
  const auto n = static_cast<std::int64_t>(n_runs);
#ifdef _OPENMP
  std::exception_ptr err = nullptr;
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, jobs)) if (jobs > 1)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      RunConfig local = cfg;
      local.seed = base_seed + static_cast<std::uint64_t>(i);
      records[static_cast<std::size_t>(i)] = run(problem, local);
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
#else
  (void)jobs;
  for (std::int64_t i = 0; i < n; ++i) {
    RunConfig local = cfg;
    local.seed = base_seed + static_cast<std::uint64_t>(i);
    records[static_cast<std::size_t>(i)] = run(problem, local);
  }
#endif
  return records;
}

}  // namespace mlshade
