#ifndef MLSHADE_CML_CROSSOVER_HPP
#define MLSHADE_CML_CROSSOVER_HPP

#include <optional>
#include <span>
#include <vector>

#include "mlshade/engine.hpp"
#include "mlshade/linalg.hpp"

namespace mlshade {

struct CmlConfig {
  double p_c = 0.4;  // probability of the covariance-learning crossover
  double p_s = 0.5;  // neighborhood fraction of the population
};

enum class CrossoverKind { binomial, cml };

CrossoverKind choose_crossover(const CmlConfig& cfg, Rng& rng);

/// Indices of the max(2, round(Np * p_s)) members nearest (Euclidean) to the
/// best individual; ties broken by population index. pop must be sorted
/// ascending by fitness.
std::vector<std::size_t> neighborhood_indices(const Population& pop, double p_s);

/// Eigenbasis of the covariance of the neighborhood above. nullopt when
/// covariance or the eigensolve fails, in which case the caller falls back to
/// binomial crossover.
std::optional<EigenDecomposition> neighborhood_basis(const Population& pop, double p_s);

/// Binomial crossover carried out in the given eigenbasis: rotate target and
/// mutant by O^T, cross, rotate back by O, bound-repair against the target.
std::vector<double> cml_crossover_with_basis(std::span<const double> target,
                                             std::span<const double> mutant, double cr,
                                             const EigenDecomposition& basis,
                                             const Bounds& bounds, Rng& rng);

/// Convenience form computing the basis from the population; falls back to
/// plain binomial crossover on degenerate input. *used_fallback (optional)
/// reports which path ran.
std::vector<double> cml_crossover(std::span<const double> target, std::span<const double> mutant,
                                  const Population& pop, double cr, const CmlConfig& cfg,
                                  const Bounds& bounds, Rng& rng, bool* used_fallback = nullptr);

}  // namespace mlshade

#endif
