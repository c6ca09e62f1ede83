#include "mlshade/engine.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <stdexcept>

#include "mlshade/errors.hpp"

namespace mlshade {

const Individual& Population::best() const {
  if (members.empty()) throw std::logic_error("Population::best: empty population");
  return *std::min_element(members.begin(), members.end(),
                           [](const Individual& a, const Individual& b) {
                             return a.fitness < b.fitness;
                           });
}

std::vector<std::size_t> Population::sort_by_fitness() {
  std::vector<std::size_t> order(members.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [this](std::size_t a, std::size_t b) {
    return members[a].fitness < members[b].fitness;
  });
  std::vector<Individual> sorted;
  sorted.reserve(members.size());
  for (std::size_t idx : order) sorted.push_back(std::move(members[idx]));
  members = std::move(sorted);
  return order;
}

Archive::Archive(std::size_t capacity, Rng rng) : capacity_(capacity), rng_(rng) {
  if (capacity_ == 0) throw std::invalid_argument("Archive: capacity must be positive");
  members_.reserve(capacity_);
}

void Archive::insert(std::vector<double> x) {
  if (members_.size() < capacity_) {
    members_.push_back(std::move(x));
  } else {
    members_[rng_.uniform_index(members_.size())] = std::move(x);
  }
}

void Archive::set_capacity(std::size_t capacity) {
  if (capacity == 0) throw std::invalid_argument("Archive: capacity must be positive");
  capacity_ = capacity;
  while (members_.size() > capacity_) {
    std::size_t victim = rng_.uniform_index(members_.size());
    members_[victim] = std::move(members_.back());
    members_.pop_back();
  }
}

Population initialize_population(const Problem& problem, std::size_t np, Rng& rng,
                                 bool parallel_eval) {
  if (np < 4) throw std::invalid_argument("initialize_population: population size must be >= 4");
  const Bounds& b = problem.bounds();
  Population pop;
  pop.members.resize(np);
  std::vector<std::vector<double>> xs(np);
  for (std::size_t i = 0; i < np; ++i) {
    xs[i].resize(b.dim());
    for (std::size_t j = 0; j < b.dim(); ++j) xs[i][j] = rng.uniform(b.lower[j], b.upper[j]);
  }
  std::vector<double> fs(np);
  evaluate_batch(problem, xs, fs, parallel_eval);
  for (std::size_t i = 0; i < np; ++i) pop.members[i] = {std::move(xs[i]), fs[i]};
  return pop;
}

double weighted_f(double f, std::uint64_t nfes, std::uint64_t nfes_max) {
  const double progress = static_cast<double>(nfes);
  const double total = static_cast<double>(nfes_max);
  if (progress <= 0.2 * total) return 0.7 * f;
  if (progress <= 0.4 * total) return 0.8 * f;
  return 1.2 * f;
}

namespace {

std::size_t draw_distinct(Rng& rng, std::size_t n, std::initializer_list<std::size_t> taboo) {
  for (;;) {
    std::size_t r = rng.uniform_index(n);
    bool clash = false;
    for (std::size_t t : taboo)
      if (r == t) clash = true;
    if (!clash) return r;
  }
}

}  // namespace

std::vector<double> mutate(StrategyKind kind, std::size_t i, const Population& pop,
                           const Archive& archive, double f, double f_w, double p_best_fraction,
                           const Bounds& bounds, Rng& rng) {
  const std::size_t np = pop.size();
  if (np < 4) throw DegenerateInput("mutate: need at least 4 distinct donors");
  const std::size_t d = pop.members[0].x.size();
  const auto p_count = std::max<std::size_t>(
      2, static_cast<std::size_t>(std::lround(static_cast<double>(np) * p_best_fraction)));
  const std::size_t pbest = rng.uniform_index(std::min(p_count, np));

  const std::vector<double>& xi = pop.members[i].x;
  std::vector<double> v(d);

  switch (kind) {
    case StrategyKind::current_to_pbest_weight_archive: {
      // v = x + Fw (xpbest - x) + F (xr1 - xr2), r2 from population + archive
      std::size_t r1 = draw_distinct(rng, np, {i});
      std::size_t r2 = draw_distinct(rng, np + archive.size(), {i, r1});
      const std::vector<double>& xr2 =
          r2 < np ? pop.members[r2].x : archive.members()[r2 - np];
      const std::vector<double>& xp = pop.members[pbest].x;
      const std::vector<double>& xr1 = pop.members[r1].x;
      for (std::size_t j = 0; j < d; ++j)
        v[j] = xi[j] + f_w * (xp[j] - xi[j]) + f * (xr1[j] - xr2[j]);
      break;
    }
    case StrategyKind::current_to_pbest: {
      // v = x + F (xpbest - x + xr1 - xr3), donors from the population only
      std::size_t r1 = draw_distinct(rng, np, {i});
      std::size_t r3 = draw_distinct(rng, np, {i, r1});
      const std::vector<double>& xp = pop.members[pbest].x;
      const std::vector<double>& xr1 = pop.members[r1].x;
      const std::vector<double>& xr3 = pop.members[r3].x;
      for (std::size_t j = 0; j < d; ++j)
        v[j] = xi[j] + f * (xp[j] - xi[j] + xr1[j] - xr3[j]);
      break;
    }
    case StrategyKind::current_to_ordpbest_weight: {
      // One donor from the top-p set, two from the whole population, ordered
      // by fitness into best/median/worst before use.
      std::size_t ra = draw_distinct(rng, np, {i, pbest});
      std::size_t rb = draw_distinct(rng, np, {i, pbest, ra});
      std::size_t idx[3] = {pbest, ra, rb};
      std::sort(std::begin(idx), std::end(idx), [&](std::size_t a, std::size_t b) {
        return pop.members[a].fitness < pop.members[b].fitness;
      });
      const std::vector<double>& ord_best = pop.members[idx[0]].x;
      const std::vector<double>& ord_mid = pop.members[idx[1]].x;
      const std::vector<double>& ord_worst = pop.members[idx[2]].x;
      for (std::size_t j = 0; j < d; ++j)
        v[j] = xi[j] + f_w * (ord_best[j] - xi[j] + ord_mid[j] - ord_worst[j]);
      break;
    }
  }
  return bound_repair(std::move(v), xi, bounds);
}

std::vector<double> binomial_crossover(std::span<const double> target,
                                       std::span<const double> mutant, double cr, Rng& rng) {
  if (target.size() != mutant.size())
    throw std::invalid_argument("binomial_crossover: length mismatch");
  const std::size_t d = target.size();
  std::vector<double> u(d);
  const std::size_t j_rand = rng.uniform_index(d);
  for (std::size_t j = 0; j < d; ++j)
    u[j] = (rng.uniform01() < cr || j == j_rand) ? mutant[j] : target[j];
  return u;
}

std::vector<double> bound_repair(std::vector<double> v, std::span<const double> target,
                                 const Bounds& bounds) {
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (v[j] < bounds.lower[j])
      v[j] = 0.5 * (bounds.lower[j] + target[j]);
    else if (v[j] > bounds.upper[j])
      v[j] = 0.5 * (bounds.upper[j] + target[j]);
  }
  return v;
}

bool select(Individual& target, Individual&& trial, Archive& archive) {
  if (trial.fitness < target.fitness) {
    archive.insert(std::move(target.x));
    target = std::move(trial);
    return true;
  }
  return false;
}

void evaluate_batch_serial(const Problem& problem, std::span<const std::vector<double>> xs,
                           std::span<double> out) {
  if (out.size() != xs.size()) throw std::invalid_argument("evaluate_batch: size mismatch");
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = problem(xs[i]);
}

void evaluate_batch(const Problem& problem, std::span<const std::vector<double>> xs,
                    std::span<double> out, bool parallel) {
  if (out.size() != xs.size()) throw std::invalid_argument("evaluate_batch: size mismatch");
#ifdef _OPENMP
  if (parallel) {
    std::exception_ptr err = nullptr;
    const auto n = static_cast<std::int64_t>(xs.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
      try {
        out[static_cast<std::size_t>(i)] = problem(xs[static_cast<std::size_t>(i)]);
      } catch (...) {
#pragma omp critical
        if (!err) err = std::current_exception();
      }
    }
    if (err) std::rethrow_exception(err);
    return;
  }
#else
  (void)parallel;
#endif
  evaluate_batch_serial(problem, xs, out);
}

}  // namespace mlshade
