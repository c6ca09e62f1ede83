#ifndef MLSHADE_RESTART_HPP
#define MLSHADE_RESTART_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "mlshade/engine.hpp"

namespace mlshade {

/// Per-individual failure counters plus the population diversity metric.
/// Restart fires for an individual once its counter passes 2*D while the
/// volume metric sits below vol_threshold.
struct StagnationTracker {
  std::vector<int> counters;
  double vol = 0.0;
  int count_threshold;
  double vol_threshold = 0.001;

  StagnationTracker(std::size_t np, std::size_t dim)
      : counters(np, 0), count_threshold(static_cast<int>(2 * dim)) {}
};

/// count(i) += 1 when the trial was worse than its target, else reset to 0.
void record_counters(StagnationTracker& tracker, std::span<const double> trial_fitness,
                     std::span<const double> target_fitness);

/// Vol = sqrt(Vol_pop / Vol_bnd); Vol_bnd = sqrt(prod(ub-lb)) evaluated in log
/// space, Vol_pop = sqrt(sum of per-dimension spreads / 2). Zero spread -> 0.
double volume_metric(const Population& pop, const Bounds& bounds);

/// Blend of two individuals, fresh coefficients per dimension; bound-repaired
/// against x1.
std::vector<double> horizontal_crossover(std::span<const double> x1, std::span<const double> x2,
                                         const Bounds& bounds, Rng& rng);

/// Copy of x with coordinate d1 replaced by a convex combination of x[d1] and
/// x[d2]. Requires D >= 2 and d1 != d2.
std::vector<double> vertical_crossover(std::span<const double> x, std::size_t d1, std::size_t d2,
                                       const Bounds& bounds, Rng& rng);

struct RestartOutcome {
  int replaced = 0;
  std::uint64_t evaluations = 0;
};

/// Replace every stagnant individual (counter past threshold while the volume
/// check holds) by horizontal or vertical crossover, a coin flip each. The
/// replacement is unconditional; the old vector goes to the archive, the new
/// one is evaluated (counting against max_evaluations) and its counter reset.
/// The population's best member is never replaced.
RestartOutcome apply_restart(Population& pop, StagnationTracker& tracker, Archive& archive,
                             const Problem& problem, Rng& rng, std::uint64_t max_evaluations);

}  // namespace mlshade

#endif
