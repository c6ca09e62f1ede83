#include "mlshade/adaptation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mlshade {

void SinusoidSelector::record_generation(std::array<int, 2> ns, std::array<int, 2> nf) {
  successes.push_back(ns);
  failures.push_back(nf);
  while (successes.size() > static_cast<std::size_t>(learning_period)) {
    successes.pop_front();
    failures.pop_front();
  }
}

namespace {

double positive_cauchy(Rng& rng, double location, double scale) {
  double v;
  do {
    v = rng.cauchy(location, scale);
  } while (v <= 0.0);
  return std::min(v, 1.0);
}

}  // namespace

FSample sample_f(const ParameterMemory& mem, const SinusoidSelector& sel, int g, double g_max,
                 double fixed_freq, Rng& rng) {
  const std::size_t r = rng.uniform_index(mem.size());
  if (static_cast<double>(g) <= g_max / 2.0) {
    const double gd = static_cast<double>(g);
    if (rng.uniform01() < sel.probs[0]) {
      // Non-adaptive decreasing sinusoid with the fixed frequency.
      double f = 0.5 * (std::sin(std::numbers::pi * (2.0 * fixed_freq * gd + 1.0)) *
                            (g_max - gd) / g_max +
                        1.0);
      return {f, FSource::sinusoid1};
    }
    // Adaptive increasing sinusoid; frequency drawn around a memory entry.
    double freq = positive_cauchy(rng, mem.mu_freq[r], 0.1);
    double f = 0.5 * (std::sin(std::numbers::pi * (2.0 * freq * gd + 1.0)) * gd / g_max + 1.0);
    return {f, FSource::sinusoid2, freq};
  }
  return {positive_cauchy(rng, mem.mu_f[r], 0.1), FSource::cauchy};
}

double sample_cr(const ParameterMemory& mem, Rng& rng) {
  const std::size_t r = rng.uniform_index(mem.size());
  return std::clamp(rng.normal(mem.mu_cr[r], 0.1), 0.0, 1.0);
}

void update_sinusoid_selector(SinusoidSelector& sel, int g) {
  if (g <= sel.learning_period) {
    sel.probs = {0.5, 0.5};
    return;
  }
  std::array<double, 2> s{};
  for (int j = 0; j < 2; ++j) {
    double ns = 0.0, nf = 0.0;
    for (const auto& gen : sel.successes) ns += gen[static_cast<std::size_t>(j)];
    for (const auto& gen : sel.failures) nf += gen[static_cast<std::size_t>(j)];
    double rate = (ns + nf) > 0.0 ? ns / (ns + nf) : 0.0;
    s[static_cast<std::size_t>(j)] = rate + sel.epsilon;
  }
  double p0 = s[0] / (s[0] + s[1]);
  sel.probs = {p0, 1.0 - p0};  // sums to 1 exactly
}

double weighted_lehmer_mean(std::span<const double> values,
                            std::span<const double> improvements) {
  if (values.size() != improvements.size())
    throw std::invalid_argument("weighted_lehmer_mean: length mismatch");
  double total = 0.0;
  for (double d : improvements) total += d;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    double w = improvements[i] / total;
    num += w * values[i] * values[i];
    den += w * values[i];
  }
  return den != 0.0 ? num / den : 0.0;
}

void update_memories(ParameterMemory& mem, std::span<const double> s_f,
                     std::span<const double> s_cr, std::span<const double> improvements,
                     std::span<const double> s_freq, std::span<const double> freq_improvements) {
  if (s_f.size() != s_cr.size() || s_f.size() != improvements.size())
    throw std::invalid_argument("update_memories: S_F/S_CR/improvements length mismatch");
  if (s_freq.size() != freq_improvements.size())
    throw std::invalid_argument("update_memories: S_freq/improvements length mismatch");

  bool wrote = false;
  if (!s_f.empty()) {
    mem.mu_f[mem.write_pos] = weighted_lehmer_mean(s_f, improvements);
    mem.mu_cr[mem.write_pos] = weighted_lehmer_mean(s_cr, improvements);
    wrote = true;
  }
  if (!s_freq.empty()) {
    mem.mu_freq[mem.write_pos] = weighted_lehmer_mean(s_freq, freq_improvements);
    wrote = true;
  }
  if (wrote) mem.write_pos = (mem.write_pos + 1) % mem.size();
}

std::vector<StrategyKind> assign_strategies(const StrategyState& state, std::size_t np,
                                            Rng& rng) {
  double total = state.probs[0] + state.probs[1] + state.probs[2];
  const double q1 = state.probs[0] / total;
  const double q2 = state.probs[1] / total;
  std::vector<StrategyKind> kinds(np);
  for (std::size_t i = 0; i < np; ++i) {
    double u = rng.uniform01();
    if (u < q1)
      kinds[i] = StrategyKind::current_to_pbest_weight_archive;
    else if (u < q1 + q2)
      kinds[i] = StrategyKind::current_to_pbest;
    else
      kinds[i] = StrategyKind::current_to_ordpbest_weight;
  }
  return kinds;
}

void update_strategy_probs(StrategyState& state, std::span<const double> old_fitness,
                           std::span<const double> new_fitness,
                           std::span<const StrategyKind> assignments) {
  if (old_fitness.size() != new_fitness.size() || old_fitness.size() != assignments.size())
    throw std::invalid_argument("update_strategy_probs: length mismatch");

  std::array<double, 3> gain{}, base{};
  for (std::size_t i = 0; i < old_fitness.size(); ++i) {
    auto k = static_cast<std::size_t>(assignments[i]);
    gain[k] += std::max(0.0, old_fitness[i] - new_fitness[i]);
    base[k] += std::abs(old_fitness[i]);
  }
  std::array<double, 3> rate{};
  double total = 0.0;
  for (std::size_t k = 0; k < 3; ++k) {
    rate[k] = base[k] > 0.0 ? gain[k] / base[k] : 0.0;
    total += rate[k];
  }
  if (total <= 0.0) {
    state.probs = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    return;
  }
  for (std::size_t k = 0; k < 3; ++k)
    state.probs[k] = std::clamp(rate[k] / total, 0.1, 0.9);
}

std::size_t lpsr(std::size_t n_init, std::size_t n_min, std::uint64_t nfes,
                 std::uint64_t nfes_max) {
  if (n_min > n_init) throw std::invalid_argument("lpsr: n_min must be <= n_init");
  if (nfes > nfes_max) throw std::invalid_argument("lpsr: nfes beyond the budget");
  const double span = static_cast<double>(n_min) - static_cast<double>(n_init);
  const double frac = static_cast<double>(nfes) / static_cast<double>(nfes_max);
  return static_cast<std::size_t>(std::lround(static_cast<double>(n_init) + span * frac));
}

}  // namespace mlshade
