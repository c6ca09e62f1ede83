#include "mlshade/cml_crossover.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mlshade/errors.hpp"

namespace mlshade {

CrossoverKind choose_crossover(const CmlConfig& cfg, Rng& rng) {
  return rng.uniform01() < cfg.p_c ? CrossoverKind::cml : CrossoverKind::binomial;
}

std::vector<std::size_t> neighborhood_indices(const Population& pop, double p_s) {
  const std::size_t np = pop.size();
  const auto m = std::max<std::size_t>(
      2, static_cast<std::size_t>(std::lround(static_cast<double>(np) * p_s)));

  const std::vector<double>& best = pop.members[0].x;
  std::vector<double> dist(np);
  for (std::size_t i = 0; i < np; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < best.size(); ++j) {
      double d = pop.members[i].x[j] - best[j];
      s += d * d;
    }
    dist[i] = s;
  }
  std::vector<std::size_t> order(np);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
  order.resize(std::min(m, np));
  return order;
}

std::optional<EigenDecomposition> neighborhood_basis(const Population& pop, double p_s) {
  if (pop.size() < 2) return std::nullopt;

  std::vector<std::size_t> picked = neighborhood_indices(pop, p_s);
  std::vector<std::vector<double>> neighborhood;
  neighborhood.reserve(picked.size());
  for (std::size_t idx : picked) neighborhood.push_back(pop.members[idx].x);

  try {
    return eigen_symmetric(covariance(neighborhood));
  } catch (const DegenerateInput&) {
    return std::nullopt;
  } catch (const NumericalError&) {
    return std::nullopt;
  }
}

std::vector<double> cml_crossover_with_basis(std::span<const double> target,
                                             std::span<const double> mutant, double cr,
                                             const EigenDecomposition& basis,
                                             const Bounds& bounds, Rng& rng) {
  Matrix ot = transpose(basis.eigenvectors);
  std::vector<double> target_rot = transform(ot, target);
  std::vector<double> mutant_rot = transform(ot, mutant);
  std::vector<double> trial_rot = binomial_crossover(target_rot, mutant_rot, cr, rng);
  std::vector<double> trial = transform(basis.eigenvectors, trial_rot);
  return bound_repair(std::move(trial), target, bounds);
}

std::vector<double> cml_crossover(std::span<const double> target, std::span<const double> mutant,
                                  const Population& pop, double cr, const CmlConfig& cfg,
                                  const Bounds& bounds, Rng& rng, bool* used_fallback) {
  std::optional<EigenDecomposition> basis = neighborhood_basis(pop, cfg.p_s);
  if (used_fallback) *used_fallback = !basis.has_value();
  if (!basis) return binomial_crossover(target, mutant, cr, rng);
  return cml_crossover_with_basis(target, mutant, cr, *basis, bounds, rng);
}

}  // namespace mlshade
