#ifndef MLSHADE_LOCAL_SEARCH_HPP
#define MLSHADE_LOCAL_SEARCH_HPP

#include <cstdint>
#include <optional>
#include <span>

#include "mlshade/engine.hpp"

namespace mlshade {

/// Gating state of the late-phase local search. The trigger probability is
/// 0.01 until a search improves the incumbent, then 0.1 until one fails.
struct LocalSearchState {
  double p_ls = 0.01;
  std::uint64_t budget_per_invocation = 0;
  double active_after = 0.85;  // fraction of the evaluation budget
};

struct QnResult {
  std::vector<double> x;
  double f;
  std::uint64_t evaluations;
};

/// Box-projected BFGS with central-difference gradients and Armijo
/// backtracking. Never returns a point worse than x0; never exceeds budget
/// evaluations. Requires budget >= 2*D + 2.
QnResult bounded_quasi_newton(const Problem& problem, std::span<const double> x0,
                              std::uint64_t budget);

struct LocalSearchOutcome {
  std::optional<Individual> refined;  // set only on strict improvement
  std::uint64_t evaluations = 0;
};

/// With probability state.p_ls, refine the incumbent best by
/// bounded_quasi_newton under min(per-invocation, remaining) budget and adjust
/// p_ls by the outcome. Otherwise a no-op.
LocalSearchOutcome maybe_local_search(const Individual& best, const Problem& problem,
                                      LocalSearchState& state, std::uint64_t nfes,
                                      std::uint64_t nfes_max, Rng& rng);

}  // namespace mlshade

#endif
