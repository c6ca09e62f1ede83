#ifndef MLSHADE_STATS_HPP
#define MLSHADE_STATS_HPP

#include <cstddef>
#include <span>
#include <string>

namespace mlshade {

struct Summary {
  double best;
  double worst;
  double median;
  double mean;
  double stddev;  // sample standard deviation, 0 for a single value
};

/// Order statistics and moments of a nonempty list. Even-length median is the
/// midpoint average.
Summary summarize(std::span<const double> values);

enum class Verdict { better, similar, worse };

std::string to_string(Verdict v);

struct WilcoxonResult {
  Verdict verdict = Verdict::similar;
  double statistic = 0.0;  // W+, the positive-difference rank sum
  double p_value = 1.0;
  std::size_t n = 0;       // pairs left after dropping zero differences
  bool sufficient = false; // false when fewer than 5 nonzero differences
};

/// Paired two-sided Wilcoxon signed-rank test on a - b. Zero differences are
/// dropped, tied |differences| get average ranks. Exact null distribution
/// (dynamic program over the 2^n sign assignments) for n <= 25, normal
/// approximation with continuity and tie correction beyond. The verdict
/// follows the sign of the median difference when the null is rejected at
/// alpha: negative (a smaller, i.e. better for errors) -> better.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b,
                                    double alpha);

}  // namespace mlshade

#endif
