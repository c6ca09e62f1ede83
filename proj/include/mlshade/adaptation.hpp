#ifndef MLSHADE_ADAPTATION_HPP
#define MLSHADE_ADAPTATION_HPP

#include <array>
#include <cstdint>
#include <deque>
#include <span>
#include <vector>

#include "mlshade/engine.hpp"
#include "mlshade/rng.hpp"

namespace mlshade {

/// Success-history memories for F, CR and the adaptive sinusoid frequency.
/// One shared cyclic write position.
struct ParameterMemory {
  std::vector<double> mu_f;
  std::vector<double> mu_cr;
  std::vector<double> mu_freq;
  std::size_t write_pos = 0;

  explicit ParameterMemory(std::size_t h = 5)
      : mu_f(h, 0.5), mu_cr(h, 0.5), mu_freq(h, 0.5) {}
  std::size_t size() const { return mu_f.size(); }
};

/// Performance-based choice between the two sinusoidal F formulas. Holds a
/// rolling window of the last learning_period generations of success/failure
/// counts per formula.
struct SinusoidSelector {
  int learning_period = 20;
  double epsilon = 0.01;
  std::array<double, 2> probs{0.5, 0.5};
  std::deque<std::array<int, 2>> successes;
  std::deque<std::array<int, 2>> failures;

  /// Append one generation of counts, trimming the window to learning_period.
  void record_generation(std::array<int, 2> ns, std::array<int, 2> nf);
};

/// Where a sampled F came from; sinusoid-2 successes feed the freq memory.
enum class FSource { sinusoid1, sinusoid2, cauchy };

struct FSample {
  double f;
  FSource source;
  double freq = 0.0;  // the Cauchy-drawn frequency, valid for sinusoid2
};

/// Scaling factor for generation g. First half of the (estimated) generations:
/// one of the two sinusoidal formulas chosen by sel.probs; second half: Cauchy
/// around a random memory entry, resampled while <= 0 and truncated to 1.
FSample sample_f(const ParameterMemory& mem, const SinusoidSelector& sel, int g, double g_max,
                 double fixed_freq, Rng& rng);

/// CR ~ Normal(mu_cr[r], 0.1) clipped to [0, 1].
double sample_cr(const ParameterMemory& mem, Rng& rng);

/// Recompute selector probabilities from the recorded window; identical 0.5
/// probabilities through the first learning_period generations.
void update_sinusoid_selector(SinusoidSelector& sel, int g);

/// Weighted Lehmer mean, weights proportional to the improvements. Exposed for
/// tests; returns 0 for an all-zero value list.
double weighted_lehmer_mean(std::span<const double> values, std::span<const double> improvements);

/// Write the three memories from this generation's success lists. Empty lists
/// leave the corresponding entry untouched; the shared write position advances
/// once if anything was written. s_freq carries its own aligned improvements
/// because it covers only the sinusoid-2 successes.
void update_memories(ParameterMemory& mem, std::span<const double> s_f,
                     std::span<const double> s_cr, std::span<const double> improvements,
                     std::span<const double> s_freq, std::span<const double> freq_improvements);

/// Per-strategy selection probabilities, clamped to [0.1, 0.9] by every update.
struct StrategyState {
  std::array<double, 3> probs{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
};

/// One strategy per individual by cumulative-threshold draw on the
/// renormalized probabilities.
std::vector<StrategyKind> assign_strategies(const StrategyState& state, std::size_t np, Rng& rng);

/// Probability update from per-strategy fitness improvement rates; resets to
/// uniform when no strategy improved anything.
void update_strategy_probs(StrategyState& state, std::span<const double> old_fitness,
                           std::span<const double> new_fitness,
                           std::span<const StrategyKind> assignments);

/// Linear population size schedule from n_init down to n_min over the budget.
std::size_t lpsr(std::size_t n_init, std::size_t n_min, std::uint64_t nfes,
                 std::uint64_t nfes_max);

}  // namespace mlshade

#endif
