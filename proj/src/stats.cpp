#include "mlshade/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace mlshade {

Summary summarize(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("summarize: empty list");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());

  const std::size_t n = sorted.size();
  Summary s{};
  s.best = sorted.front();
  s.worst = sorted.back();
  s.median = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(n);
  if (n > 1) {
    double acc = 0.0;
    for (double v : sorted) acc += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(acc / static_cast<double>(n - 1));
  }
  return s;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::better: return "better";
    case Verdict::worse: return "worse";
    case Verdict::similar: return "similar";
  }
  return "similar";
}

namespace {

// Average ranks of |d|, doubled so ties keep everything integral.
std::vector<long long> doubled_ranks(const std::vector<double>& d) {
  const std::size_t n = d.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return std::abs(d[i]) < std::abs(d[j]);
  });
  std::vector<long long> ranks2(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && std::abs(d[order[j + 1]]) == std::abs(d[order[i]])) ++j;
    // average of positions i+1 .. j+1, doubled: (i+1) + (j+1)
    long long r2 = static_cast<long long>(i) + static_cast<long long>(j) + 2;
    for (std::size_t k = i; k <= j; ++k) ranks2[order[k]] = r2;
    i = j + 1;
  }
  return ranks2;
}

// Exact two-sided p by counting sign assignments whose W+ deviates from the
// mean at least as much as the observed one. Runs over doubled ranks, so the
// arithmetic is pure integers.
double exact_p_value(const std::vector<long long>& ranks2, long long w2_obs) {
  const std::size_t n = ranks2.size();
  long long total2 = std::accumulate(ranks2.begin(), ranks2.end(), 0LL);
  // counts[s] = number of sign assignments with doubled W+ == s
  std::vector<double> counts(static_cast<std::size_t>(total2) + 1, 0.0);
  counts[0] = 1.0;
  long long reach = 0;
  for (long long r : ranks2) {
    reach += r;
    for (long long s = reach; s >= r; --s)
      counts[static_cast<std::size_t>(s)] += counts[static_cast<std::size_t>(s - r)];
  }
  // deviations measured around the doubled mean 2*mu = total2 / 2; compare
  // 4*|W+ - mu| to stay in integers: |4*w2 - 2*total2| >= |4*w2_obs - 2*total2|
  long long dev_obs = std::abs(4 * w2_obs - 2 * total2);
  double hits = 0.0;
  for (long long s = 0; s <= total2; ++s)
    if (std::abs(4 * s - 2 * total2) >= dev_obs) hits += counts[static_cast<std::size_t>(s)];
  return hits / std::ldexp(1.0, static_cast<int>(n));
}

double normal_p_value(const std::vector<long long>& ranks2, long long w2_obs) {
  const double n = static_cast<double>(ranks2.size());
  const double w = static_cast<double>(w2_obs) / 2.0;
  const double mu = n * (n + 1.0) / 4.0;
  double sigma2 = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0;
  // tie correction: group counts from repeated doubled ranks
  std::vector<long long> sorted(ranks2);
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
    double t = static_cast<double>(j - i + 1);
    sigma2 -= t * (t * t - 1.0) / 48.0;
    i = j + 1;
  }
  if (sigma2 <= 0.0) return 1.0;
  double num = w - mu;
  // continuity correction toward the mean
  num -= num > 0.0 ? 0.5 : num < 0.0 ? -0.5 : 0.0;
  double z = num / std::sqrt(sigma2);
  return std::erfc(std::abs(z) / std::sqrt(2.0));
}

}  // namespace

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b,
                                    double alpha) {
  if (a.size() != b.size())
    throw std::invalid_argument("wilcoxon_signed_rank: paired samples differ in length");

  std::vector<double> d;
  d.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) d.push_back(a[i] - b[i]);

  WilcoxonResult result;
  result.n = d.size();
  if (d.size() < 5) return result;  // insufficient data -> similar, flagged
  result.sufficient = true;

  std::vector<long long> ranks2 = doubled_ranks(d);
  long long w2 = 0;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d[i] > 0) w2 += ranks2[i];
  result.statistic = static_cast<double>(w2) / 2.0;

  result.p_value =
      d.size() <= 25 ? exact_p_value(ranks2, w2) : normal_p_value(ranks2, w2);

  if (result.p_value < alpha) {
    std::sort(d.begin(), d.end());
    const std::size_t n = d.size();
    double med = n % 2 == 1 ? d[n / 2] : 0.5 * (d[n / 2 - 1] + d[n / 2]);
    if (med < 0.0)
      result.verdict = Verdict::better;
    else if (med > 0.0)
      result.verdict = Verdict::worse;
  }
  return result;
}

}  // namespace mlshade
