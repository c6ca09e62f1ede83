#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "mlshade/problem.hpp"
#include "mlshade/restart.hpp"

using namespace mlshade;

namespace {

Population cluster_pop(std::size_t np, std::size_t dim, double center, double spread, Rng& rng,
                       const Problem& problem) {
  Population pop;
  for (std::size_t i = 0; i < np; ++i) {
    std::vector<double> x(dim);
    for (auto& v : x) v = center + rng.uniform(-spread, spread);
    double f = problem(x);
    pop.members.push_back({std::move(x), f});
  }
  return pop;
}

}  // namespace

TEST_CASE("counters increment on failure and reset otherwise") {
  StagnationTracker t(3, 5);
  CHECK(t.count_threshold == 10);
  t.counters = {4, 4, 4};
  // trial worse / better / equal
  record_counters(t, std::vector<double>{5.0, 1.0, 2.0}, std::vector<double>{4.0, 2.0, 2.0});
  CHECK(t.counters[0] == 5);
  CHECK(t.counters[1] == 0);
  CHECK(t.counters[2] == 0);
}

TEST_CASE("volume metric hand value at D=1") {
  // full spread over [-100, 100]: sqrt(sqrt(100) / sqrt(200))
  Population pop;
  pop.members.push_back({{-100.0}, 0.0});
  pop.members.push_back({{100.0}, 1.0});
  Bounds b = Bounds::uniform(1, -100.0, 100.0);
  CHECK(volume_metric(pop, b) == doctest::Approx(0.8408964152537145).epsilon(1e-12));
}

TEST_CASE("volume metric is zero for a collapsed population") {
  Population pop;
  for (int i = 0; i < 5; ++i) pop.members.push_back({{3.0, -1.0}, 0.0});
  CHECK(volume_metric(pop, Bounds::uniform(2, -100.0, 100.0)) == 0.0);
}

TEST_CASE("volume metric shrinks with the spread and survives high dimensions") {
  Bounds b = Bounds::uniform(50, -100.0, 100.0);
  Rng rng(3);
  auto problem = make_builtin("sphere", 50);
  Population wide = cluster_pop(10, 50, 0.0, 90.0, rng, *problem);
  Population narrow = cluster_pop(10, 50, 0.0, 1e-4, rng, *problem);
  double v_wide = volume_metric(wide, b);
  double v_narrow = volume_metric(narrow, b);
  CHECK(std::isfinite(v_wide));
  CHECK(v_narrow < v_wide);
  CHECK(v_narrow > 0.0);
}

TEST_CASE("volume metric ignores member order") {
  Rng rng(5);
  auto problem = make_builtin("sphere", 3);
  Population pop = cluster_pop(8, 3, 1.0, 5.0, rng, *problem);
  Bounds b = Bounds::uniform(3, -100.0, 100.0);
  double before = volume_metric(pop, b);
  std::swap(pop.members[0], pop.members[5]);
  std::swap(pop.members[2], pop.members[7]);
  CHECK(volume_metric(pop, b) == before);
}

TEST_CASE("horizontal crossover follows the per-dimension formula") {
  Bounds b = Bounds::uniform(3, -100.0, 100.0);
  std::vector<double> x1{1.0, -2.0, 30.0};
  std::vector<double> x2{-4.0, 5.0, 6.0};
  // replay the stream: per dimension the draws are rd1 then rnds
  Rng replay(101);
  std::vector<double> expect(3);
  for (std::size_t j = 0; j < 3; ++j) {
    double rd1 = replay.uniform01();
    double rnds = replay.uniform(-1.0, 1.0);
    expect[j] = rd1 * x1[j] + (1.0 - rd1) * x2[j] + rnds * (x1[j] - x2[j]);
  }
  Rng rng(101);
  auto h = horizontal_crossover(x1, x2, b, rng);
  CHECK(h == bound_repair(std::move(expect), x1, b));
}

TEST_CASE("horizontal crossover of identical parents is the parent") {
  Bounds b = Bounds::uniform(2, -100.0, 100.0);
  std::vector<double> x{7.0, -3.0};
  Rng rng(7);
  for (int rep = 0; rep < 100; ++rep) {
    auto h = horizontal_crossover(x, x, b, rng);
    CHECK(h[0] == doctest::Approx(7.0).epsilon(1e-14));
    CHECK(h[1] == doctest::Approx(-3.0).epsilon(1e-14));
  }
}

TEST_CASE("horizontal crossover stays within bounds") {
  Bounds b = Bounds::uniform(4, -10.0, 10.0);
  Rng rng(9);
  for (int rep = 0; rep < 500; ++rep) {
    std::vector<double> x1(4), x2(4);
    for (auto& v : x1) v = rng.uniform(-10.0, 10.0);
    for (auto& v : x2) v = rng.uniform(-10.0, 10.0);
    CHECK(b.contains(horizontal_crossover(x1, x2, b, rng)));
  }
}

TEST_CASE("vertical crossover blends exactly one coordinate") {
  Bounds b = Bounds::uniform(2, -100.0, 100.0);
  std::vector<double> x{0.0, 10.0};
  Rng replay(55);
  double rd1 = replay.uniform01();
  Rng rng(55);
  auto v = vertical_crossover(x, 0, 1, b, rng);
  CHECK(v[0] == doctest::Approx(rd1 * 0.0 + (1.0 - rd1) * 10.0).epsilon(1e-15));
  CHECK(v[1] == 10.0);
  // the blend is a convex combination: recoverable weight in [0, 1]
  double w = (v[0] - x[1]) / (x[0] - x[1]);
  CHECK(w >= 0.0);
  CHECK(w <= 1.0);
}

TEST_CASE("vertical crossover of equal coordinates changes nothing") {
  Bounds b = Bounds::uniform(3, -100.0, 100.0);
  std::vector<double> x{4.0, 4.0, -1.0};
  Rng rng(77);
  for (int rep = 0; rep < 50; ++rep) {
    auto v = vertical_crossover(x, 0, 1, b, rng);
    CHECK(v == x);
  }
}

TEST_CASE("vertical crossover validates its dimensions") {
  Bounds b1 = Bounds::uniform(1, -1.0, 1.0);
  Rng rng(1);
  CHECK_THROWS_AS(vertical_crossover(std::vector<double>{0.5}, 0, 0, b1, rng),
                  std::invalid_argument);
  Bounds b3 = Bounds::uniform(3, -1.0, 1.0);
  CHECK_THROWS_AS(vertical_crossover(std::vector<double>{0.1, 0.2, 0.3}, 2, 2, b3, rng),
                  std::invalid_argument);
}

TEST_CASE("restart leaves the population alone while the volume is healthy") {
  auto problem = make_builtin("sphere", 2);
  Rng rng(11);
  Population pop = cluster_pop(6, 2, 0.0, 50.0, rng, *problem);
  StagnationTracker t(6, 2);
  t.counters.assign(6, 100);         // far past the threshold
  t.vol = 0.5;                       // healthy diversity
  Archive arc(16, Rng(2));
  Population before = pop;
  auto outcome = apply_restart(pop, t, arc, *problem, rng, 1000);
  CHECK(outcome.replaced == 0);
  CHECK(outcome.evaluations == 0);
  for (std::size_t i = 0; i < 6; ++i) CHECK(pop.members[i].x == before.members[i].x);
}

TEST_CASE("restart leaves non-stagnant individuals alone") {
  auto problem = make_builtin("sphere", 2);
  Rng rng(13);
  Population pop = cluster_pop(6, 2, 1.0, 0.01, rng, *problem);
  StagnationTracker t(6, 2);
  t.counters.assign(6, 4);  // threshold is 2*D = 4: not strictly past it
  t.vol = 1e-5;
  Archive arc(16, Rng(3));
  auto outcome = apply_restart(pop, t, arc, *problem, rng, 1000);
  CHECK(outcome.replaced == 0);
}

TEST_CASE("a single stagnant individual costs exactly one evaluation") {
  auto counter = std::make_shared<int>(0);
  FunctionProblem problem("counted-sphere", Bounds::uniform(2, -100.0, 100.0), 0.0,
                          [counter](std::span<const double> x) {
                            ++*counter;
                            return x[0] * x[0] + x[1] * x[1];
                          });
  Rng rng(17);
  Population pop = cluster_pop(6, 2, 1.0, 0.001, rng, problem);
  StagnationTracker t(6, 2);
  t.vol = 1e-6;
  t.counters.assign(6, 0);
  t.counters[3] = 5;  // the only one past 2*D = 4
  Archive arc(16, Rng(4));
  *counter = 0;
  auto before = pop.members[3].x;
  auto outcome = apply_restart(pop, t, arc, problem, rng, 1000);
  CHECK(outcome.replaced == 1);
  CHECK(outcome.evaluations == 1);
  CHECK(*counter == 1);
  CHECK(t.counters[3] == 0);
  CHECK(problem.bounds().contains(pop.members[3].x));
  // the replaced parent is preserved in the archive
  bool archived = false;
  for (const auto& m : arc.members()) archived = archived || m == before;
  CHECK(archived);
}

TEST_CASE("restart replaces every stagnant member except the best") {
  auto problem = make_builtin("rastrigin", 3);
  Rng rng(19);
  Population pop = cluster_pop(8, 3, 2.0, 1e-4, rng, *problem);
  StagnationTracker t(8, 3);
  t.counters.assign(8, 7);  // all past 2*D = 6
  t.vol = 1e-7;
  Archive arc(32, Rng(5));

  std::size_t best_idx = 0;
  for (std::size_t i = 1; i < 8; ++i)
    if (pop.members[i].fitness < pop.members[best_idx].fitness) best_idx = i;
  auto best_x = pop.members[best_idx].x;

  auto outcome = apply_restart(pop, t, arc, *problem, rng, 1000);
  CHECK(outcome.replaced == 7);
  CHECK(outcome.evaluations == 7);
  CHECK(pop.members[best_idx].x == best_x);
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(problem->bounds().contains(pop.members[i].x));
    if (i != best_idx) CHECK(t.counters[i] == 0);
  }
}

TEST_CASE("restart respects the evaluation allowance") {
  auto problem = make_builtin("sphere", 2);
  Rng rng(23);
  Population pop = cluster_pop(10, 2, 1.0, 1e-4, rng, *problem);
  StagnationTracker t(10, 2);
  t.counters.assign(10, 9);
  t.vol = 1e-7;
  Archive arc(32, Rng(6));
  auto outcome = apply_restart(pop, t, arc, *problem, rng, 3);
  CHECK(outcome.evaluations == 3);
  CHECK(outcome.replaced == 3);
}
