#include "mlshade/restart.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mlshade {

void record_counters(StagnationTracker& tracker, std::span<const double> trial_fitness,
                     std::span<const double> target_fitness) {
  if (trial_fitness.size() != target_fitness.size() ||
      trial_fitness.size() != tracker.counters.size())
    throw std::invalid_argument("record_counters: length mismatch");
  for (std::size_t i = 0; i < trial_fitness.size(); ++i) {
    if (trial_fitness[i] > target_fitness[i])
      ++tracker.counters[i];
    else
      tracker.counters[i] = 0;
  }
}

double volume_metric(const Population& pop, const Bounds& bounds) {
  if (pop.size() < 2) throw std::invalid_argument("volume_metric: need at least 2 individuals");
  const std::size_t d = bounds.dim();

  double spread_sum = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    double lo = pop.members[0].x[j], hi = lo;
    for (const Individual& ind : pop.members) {
      lo = std::min(lo, ind.x[j]);
      hi = std::max(hi, ind.x[j]);
    }
    spread_sum += hi - lo;
  }
  const double vol_pop = std::sqrt(spread_sum / 2.0);
  if (vol_pop == 0.0) return 0.0;

  // prod(ub - lb) overflows naive arithmetic already at D=30 with the usual
  // [-100, 100] box; keep the bound volume in log space.
  double log_vol_bnd = 0.0;
  for (std::size_t j = 0; j < d; ++j) log_vol_bnd += std::log(bounds.upper[j] - bounds.lower[j]);
  log_vol_bnd *= 0.5;

  return std::exp(0.5 * (std::log(vol_pop) - log_vol_bnd));
}

std::vector<double> horizontal_crossover(std::span<const double> x1, std::span<const double> x2,
                                         const Bounds& bounds, Rng& rng) {
  if (x1.size() != x2.size()) throw std::invalid_argument("horizontal_crossover: length mismatch");
  std::vector<double> h(x1.size());
  for (std::size_t j = 0; j < x1.size(); ++j) {
    double rd1 = rng.uniform01();
    double rd2 = 1.0 - rd1;
    double rnds = rng.uniform(-1.0, 1.0);
    h[j] = rd1 * x1[j] + rd2 * x2[j] + rnds * (x1[j] - x2[j]);
  }
  return bound_repair(std::move(h), x1, bounds);
}

std::vector<double> vertical_crossover(std::span<const double> x, std::size_t d1, std::size_t d2,
                                       const Bounds& bounds, Rng& rng) {
  if (x.size() < 2) throw std::invalid_argument("vertical_crossover: dimension must be >= 2");
  if (d1 == d2 || d1 >= x.size() || d2 >= x.size())
    throw std::invalid_argument("vertical_crossover: need two distinct valid dimensions");
  std::vector<double> v(x.begin(), x.end());
  double rd1 = rng.uniform01();
  v[d1] = rd1 * x[d1] + (1.0 - rd1) * x[d2];
  return bound_repair(std::move(v), x, bounds);
}

RestartOutcome apply_restart(Population& pop, StagnationTracker& tracker, Archive& archive,
                             const Problem& problem, Rng& rng, std::uint64_t max_evaluations) {
  RestartOutcome outcome;
  const std::size_t np = pop.size();
  if (tracker.counters.size() != np)
    throw std::invalid_argument("apply_restart: tracker out of sync with population");
  if (tracker.vol >= tracker.vol_threshold) return outcome;

  std::size_t best_idx = 0;
  for (std::size_t i = 1; i < np; ++i)
    if (pop.members[i].fitness < pop.members[best_idx].fitness) best_idx = i;

  const std::size_t d = problem.dim();
  for (std::size_t i = 0; i < np; ++i) {
    if (tracker.counters[i] <= tracker.count_threshold) continue;
    if (i == best_idx) continue;  // keep the incumbent best intact
    if (outcome.evaluations >= max_evaluations) break;

    std::vector<double> fresh;
    if (d >= 2 && rng.uniform01() <= 0.5) {
      std::size_t a = rng.uniform_index(d);
      std::size_t b;
      do {
        b = rng.uniform_index(d);
      } while (b == a);
      fresh = vertical_crossover(pop.members[i].x, a, b, problem.bounds(), rng);
    } else {
      std::size_t partner;
      do {
        partner = rng.uniform_index(np);
      } while (partner == i);
      fresh = horizontal_crossover(pop.members[i].x, pop.members[partner].x, problem.bounds(),
                                   rng);
    }

    double f = problem(fresh);
    ++outcome.evaluations;
    archive.insert(std::move(pop.members[i].x));
    pop.members[i] = {std::move(fresh), f};
    tracker.counters[i] = 0;
    ++outcome.replaced;
  }
  return outcome;
}

}  // namespace mlshade
