#include "mlshade/local_search.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "mlshade/linalg.hpp"

namespace mlshade {

namespace {

constexpr double kGradTol = 1e-10;   // infinity norm
constexpr double kStepTol = 1e-12;   // euclidean norm
constexpr double kArmijoC = 1e-4;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double inf_norm(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

// Counts calls against the budget and remembers the best point seen,
// gradient probes included.
class BudgetedEval {
 public:
  BudgetedEval(const Problem& problem, std::uint64_t budget)
      : problem_(problem), budget_(budget) {}

  bool can_afford(std::uint64_t calls) const { return used_ + calls <= budget_; }
  std::uint64_t used() const { return used_; }
  const std::vector<double>& best_x() const { return best_x_; }
  double best_f() const { return best_f_; }

  double operator()(const std::vector<double>& x) {
    ++used_;
    double f = problem_(x);
    if (used_ == 1 || f < best_f_) {
      best_f_ = f;
      best_x_ = x;
    }
    return f;
  }

 private:
  const Problem& problem_;
  std::uint64_t budget_;
  std::uint64_t used_ = 0;
  std::vector<double> best_x_;
  double best_f_ = 0.0;
};

// Central differences with probe points clipped into the box.
bool fd_gradient(BudgetedEval& eval, const Bounds& bounds, const std::vector<double>& x,
                 std::vector<double>& g) {
  const std::size_t d = x.size();
  if (!eval.can_afford(2 * d)) return false;
  std::vector<double> probe = x;
  for (std::size_t j = 0; j < d; ++j) {
    double h = 1e-6 * std::max(1.0, std::abs(x[j]));
    double hi = std::min(x[j] + h, bounds.upper[j]);
    double lo = std::max(x[j] - h, bounds.lower[j]);
    probe[j] = hi;
    double f_hi = eval(probe);
    probe[j] = lo;
    double f_lo = eval(probe);
    probe[j] = x[j];
    g[j] = hi > lo ? (f_hi - f_lo) / (hi - lo) : 0.0;
  }
  return true;
}

}  // namespace

QnResult bounded_quasi_newton(const Problem& problem, std::span<const double> x0,
                              std::uint64_t budget) {
  const Bounds& bounds = problem.bounds();
  const std::size_t d = x0.size();
  if (budget < 2 * d + 2)
    throw std::invalid_argument("bounded_quasi_newton: budget must be >= 2*D + 2");
  if (!bounds.contains(x0))
    throw std::invalid_argument("bounded_quasi_newton: start point out of bounds");

  BudgetedEval eval(problem, budget);
  std::vector<double> x(x0.begin(), x0.end());
  double fx = eval(x);

  Matrix h_inv = Matrix::identity(d);
  std::vector<double> g(d), g_new(d), dir(d), x_new(d), s(d), y(d);

  if (!fd_gradient(eval, bounds, x, g)) return {eval.best_x(), eval.best_f(), eval.used()};

  while (inf_norm(g) >= kGradTol) {
    // Quasi-Newton direction, reset to steepest descent when it fails to
    // point downhill.
    for (std::size_t i = 0; i < d; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < d; ++j) acc -= h_inv(i, j) * g[j];
      dir[i] = acc;
    }
    if (dot(dir, g) >= 0.0) {
      h_inv = Matrix::identity(d);
      for (std::size_t i = 0; i < d; ++i) dir[i] = -g[i];
    }

    // Backtracking with projection onto the box; Armijo measured along the
    // actual (projected) displacement.
    double alpha = 1.0;
    bool accepted = false;
    double f_new = fx;
    for (int back = 0; back < 40; ++back) {
      if (!eval.can_afford(1)) return {eval.best_x(), eval.best_f(), eval.used()};
      double moved = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        x_new[j] = std::clamp(x[j] + alpha * dir[j], bounds.lower[j], bounds.upper[j]);
        moved += std::abs(x_new[j] - x[j]);
      }
      if (moved == 0.0) break;  // projection pinned the step; nowhere to go
      f_new = eval(x_new);
      double slope = 0.0;
      for (std::size_t j = 0; j < d; ++j) slope += g[j] * (x_new[j] - x[j]);
      if (f_new <= fx + kArmijoC * slope && slope < 0.0) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;

    for (std::size_t j = 0; j < d; ++j) s[j] = x_new[j] - x[j];
    if (norm2(s) < kStepTol) break;
    x = x_new;
    fx = f_new;

    if (!fd_gradient(eval, bounds, x, g_new)) break;
    for (std::size_t j = 0; j < d; ++j) y[j] = g_new[j] - g[j];
    double sy = dot(s, y);
    if (sy > 1e-12 * norm2(s) * norm2(y)) {
      // BFGS inverse update: H <- (I - r s y^T) H (I - r y s^T) + r s s^T
      double rho = 1.0 / sy;
      std::vector<double> hy(d, 0.0);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) hy[i] += h_inv(i, j) * y[j];
      double yhy = dot(y, hy);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
          h_inv(i, j) += rho * ((1.0 + rho * yhy) * s[i] * s[j] - hy[i] * s[j] - s[i] * hy[j]);
    }
    g = g_new;
  }
  return {eval.best_x(), eval.best_f(), eval.used()};
}

LocalSearchOutcome maybe_local_search(const Individual& best, const Problem& problem,
                                      LocalSearchState& state, std::uint64_t nfes,
                                      std::uint64_t nfes_max, Rng& rng) {
  if (rng.uniform01() >= state.p_ls) return {};

  const std::uint64_t remaining = nfes_max > nfes ? nfes_max - nfes : 0;
  const std::uint64_t budget = std::min(state.budget_per_invocation, remaining);
  if (budget < 2 * problem.dim() + 2) return {};

  QnResult result = bounded_quasi_newton(problem, best.x, budget);
  if (result.f < best.fitness) {
    state.p_ls = 0.1;
    return {Individual{std::move(result.x), result.f}, result.evaluations};
  }
  state.p_ls = 0.01;
  return {std::nullopt, result.evaluations};
}

}  // namespace mlshade
