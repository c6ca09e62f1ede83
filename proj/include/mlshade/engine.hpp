#ifndef MLSHADE_ENGINE_HPP
#define MLSHADE_ENGINE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "mlshade/problem.hpp"
#include "mlshade/rng.hpp"

namespace mlshade {

struct Individual {
  std::vector<double> x;
  double fitness;
};

/// The evolving population; minimization, so sorted order is ascending fitness.
class Population {
 public:
  std::vector<Individual> members;
  int generation = 0;

  std::size_t size() const { return members.size(); }
  const Individual& best() const;

  /// Stable ascending sort by fitness; returns the permutation applied so
  /// per-individual side state (stagnation counters) can follow.
  std::vector<std::size_t> sort_by_fitness();
};

/// Pool of recently replaced parent vectors. A full archive evicts a uniformly
/// random existing member to admit a new one; evictions draw from the stream
/// injected at construction.
class Archive {
 public:
  Archive(std::size_t capacity, Rng rng);

  void insert(std::vector<double> x);
  /// Shrinks storage by random eviction when the new capacity is smaller.
  void set_capacity(std::size_t capacity);

  std::size_t size() const { return members_.size(); }
  std::size_t capacity() const { return capacity_; }
  std::span<const std::vector<double>> members() const { return members_; }

 private:
  std::size_t capacity_;
  std::vector<std::vector<double>> members_;
  Rng rng_;
};

/// The three mutation strategies of the multi-operator ensemble.
enum class StrategyKind {
  current_to_pbest_weight_archive,  // MS1
  current_to_pbest,                 // MS2
  current_to_ordpbest_weight,       // MS3
};

/// Uniform random population inside the bounds, all members evaluated.
Population initialize_population(const Problem& problem, std::size_t np, Rng& rng,
                                 bool parallel_eval = false);

/// Time-staged scaling factor: 0.7*F, 0.8*F, then 1.2*F as the budget passes
/// the 0.2 and 0.4 marks.
double weighted_f(double f, std::uint64_t nfes, std::uint64_t nfes_max);

/// Mutant vector for member i, bound-repaired. pop must be sorted ascending.
/// Throws DegenerateInput if the population cannot supply distinct donors.
std::vector<double> mutate(StrategyKind kind, std::size_t i, const Population& pop,
                           const Archive& archive, double f, double f_w, double p_best_fraction,
                           const Bounds& bounds, Rng& rng);

std::vector<double> binomial_crossover(std::span<const double> target,
                                       std::span<const double> mutant, double cr, Rng& rng);

/// Midpoint repair: out-of-bound coordinates move to the midpoint of the
/// violated bound and the (feasible) target.
std::vector<double> bound_repair(std::vector<double> v, std::span<const double> target,
                                 const Bounds& bounds);

/// Greedy one-to-one selection. Strictly better trials replace the target,
/// whose old vector goes to the archive. Returns true on strict improvement.
bool select(Individual& target, Individual&& trial, Archive& archive);

/// Fitness of every vector in xs. The OpenMP path and evaluate_batch_serial
/// produce identical results; the objective contract is purity.
void evaluate_batch(const Problem& problem, std::span<const std::vector<double>> xs,
                    std::span<double> out, bool parallel = true);

/// Serial reference for the kernel above.
void evaluate_batch_serial(const Problem& problem, std::span<const std::vector<double>> xs,
                           std::span<double> out);

}  // namespace mlshade

#endif
