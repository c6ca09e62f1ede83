#ifndef MLSHADE_RNG_HPP
#define MLSHADE_RNG_HPP

#include <cstdint>
#include <random>

namespace mlshade {

/// Deterministic random stream. One root stream per run, forked into named
/// sub-streams so each module consumes an independent, replayable sequence.
/// All distributions are generated from raw 64-bit draws (no reliance on
/// implementation-defined std:: distributions), so a given seed produces the
/// same sequence on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Child stream derived from (seed, stream id); independent of draws made so far.
  Rng fork(std::uint64_t stream_id) const;

  /// Uniform in [0, 1).
  double uniform01();
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi);
  /// Uniform integer in [0, n); n must be positive.
  std::size_t uniform_index(std::size_t n);
  /// Normal via Box-Muller.
  double normal(double mean, double stddev);
  /// Cauchy via inverse transform.
  double cauchy(double location, double scale);

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

}  // namespace mlshade

#endif
