#ifndef MLSHADE_PROBLEM_HPP
#define MLSHADE_PROBLEM_HPP

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mlshade/linalg.hpp"

namespace mlshade {

/// Per-dimension box limits. lower[j] < upper[j] for all j, dimension >= 1.
struct Bounds {
  std::vector<double> lower;
  std::vector<double> upper;

  Bounds(std::vector<double> lo, std::vector<double> hi);
  static Bounds uniform(std::size_t dim, double lo, double hi);

  std::size_t dim() const { return lower.size(); }
  bool contains(std::span<const double> x) const;
  /// x clamped coordinate-wise into the box.
  std::vector<double> clamp(std::vector<double> x) const;
};

/// A bound-constrained minimization problem. evaluate() must be deterministic,
/// side-effect free and finite inside the bounds; calls are checked for
/// dimension and finiteness and may run concurrently.
class Problem {
 public:
  Problem(std::string name, Bounds bounds, std::optional<double> known_optimum)
      : name_(std::move(name)), bounds_(std::move(bounds)), known_optimum_(known_optimum) {}
  virtual ~Problem() = default;

  const std::string& name() const { return name_; }
  const Bounds& bounds() const { return bounds_; }
  std::size_t dim() const { return bounds_.dim(); }
  std::optional<double> known_optimum() const { return known_optimum_; }

  /// Checked evaluation: throws std::invalid_argument on dimension mismatch,
  /// EvaluationError (naming the problem) on a non-finite result.
  double operator()(std::span<const double> x) const;

 protected:
  virtual double eval(std::span<const double> x) const = 0;

 private:
  std::string name_;
  Bounds bounds_;
  std::optional<double> known_optimum_;
};

/// Problem backed by a plain callable; hosts all the builtin functions.
class FunctionProblem final : public Problem {
 public:
  using Fn = std::function<double(std::span<const double>)>;
  FunctionProblem(std::string name, Bounds bounds, std::optional<double> known_optimum, Fn fn)
      : Problem(std::move(name), std::move(bounds), known_optimum), fn_(std::move(fn)) {}

 protected:
  double eval(std::span<const double> x) const override { return fn_(x); }

 private:
  Fn fn_;
};

/// f(x) = base(M * (x - shift)) + bias, the composition CEC-style suites use.
class ShiftRotateProblem final : public Problem {
 public:
  ShiftRotateProblem(std::shared_ptr<const Problem> base, std::vector<double> shift,
                     Matrix rotation, double bias);

 protected:
  double eval(std::span<const double> x) const override;

 private:
  std::shared_ptr<const Problem> base_;
  std::vector<double> shift_;
  Matrix rotation_;
  double bias_;
};

/// Reads D shift values followed by D*D row-major rotation values from a
/// whitespace-separated text file. Throws ParseError (with line number) on
/// malformed content, ValidationError if M*M^T deviates from I by more than
/// 1e-9 in any entry.
std::pair<std::vector<double>, Matrix> load_shift_rotate(const std::string& path, std::size_t dim);

/// The seven builtin benchmark functions on [-100, 100]^dim, optimum value 0.
/// Names: sphere, ellipsoid, rosenbrock, rastrigin, ackley, griewank, schwefel12.
std::vector<std::shared_ptr<Problem>> builtin_suite(std::size_t dim);

/// Single builtin by name; nullptr if the name is unknown.
std::shared_ptr<Problem> make_builtin(const std::string& name, std::size_t dim);

}  // namespace mlshade

#endif
