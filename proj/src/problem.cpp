#include "mlshade/problem.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "mlshade/errors.hpp"

namespace mlshade {

Bounds::Bounds(std::vector<double> lo, std::vector<double> hi)
    : lower(std::move(lo)), upper(std::move(hi)) {
  if (lower.empty() || lower.size() != upper.size())
    throw std::invalid_argument("Bounds: lower/upper must share a positive dimension");
  for (std::size_t j = 0; j < lower.size(); ++j)
    if (!(lower[j] < upper[j]))
      throw std::invalid_argument("Bounds: lower[" + std::to_string(j) + "] must be < upper");
}

Bounds Bounds::uniform(std::size_t dim, double lo, double hi) {
  return Bounds(std::vector<double>(dim, lo), std::vector<double>(dim, hi));
}

bool Bounds::contains(std::span<const double> x) const {
  if (x.size() != dim()) return false;
  for (std::size_t j = 0; j < x.size(); ++j)
    if (x[j] < lower[j] || x[j] > upper[j]) return false;
  return true;
}

std::vector<double> Bounds::clamp(std::vector<double> x) const {
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = std::clamp(x[j], lower[j], upper[j]);
  return x;
}

double Problem::operator()(std::span<const double> x) const {
  if (x.size() != dim())
    throw std::invalid_argument("evaluate: dimension mismatch for problem " + name_);
  double f = eval(x);
  if (!std::isfinite(f))
    throw EvaluationError("evaluate: non-finite value from problem " + name_);
  return f;
}

ShiftRotateProblem::ShiftRotateProblem(std::shared_ptr<const Problem> base,
                                       std::vector<double> shift, Matrix rotation, double bias)
    : Problem(base->name() + "-shift-rotate", base->bounds(),
              base->known_optimum() ? std::optional<double>(*base->known_optimum() + bias)
                                    : std::nullopt),
      base_(std::move(base)),
      shift_(std::move(shift)),
      rotation_(std::move(rotation)),
      bias_(bias) {
  if (shift_.size() != dim() || rotation_.rows() != dim() || rotation_.cols() != dim())
    throw std::invalid_argument("ShiftRotateProblem: shift/rotation dimension mismatch");
}

double ShiftRotateProblem::eval(std::span<const double> x) const {
  std::vector<double> z(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) z[j] = x[j] - shift_[j];
  std::vector<double> rotated = transform(rotation_, z);
  return (*base_)(rotated) + bias_;
}

std::pair<std::vector<double>, Matrix> load_shift_rotate(const std::string& path,
                                                         std::size_t dim) {
  std::ifstream in(path);
  if (!in) throw ParseError("load_shift_rotate: cannot open " + path, 0);

  std::vector<double> values;
  values.reserve(dim * (dim + 1));
  const std::size_t expected = dim * (dim + 1);
  int line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      std::size_t pos = 0;
      double v;
      try {
        v = std::stod(tok, &pos);
      } catch (const std::exception&) {
        throw ParseError("load_shift_rotate: not a number: '" + tok + "'", line_no);
      }
      if (pos != tok.size())
        throw ParseError("load_shift_rotate: trailing characters in '" + tok + "'", line_no);
      if (values.size() == expected)
        throw ParseError("load_shift_rotate: more than " + std::to_string(expected) + " values",
                         line_no);
      values.push_back(v);
    }
  }
  if (values.size() != expected)
    throw ParseError("load_shift_rotate: expected " + std::to_string(expected) + " values, got " +
                         std::to_string(values.size()),
                     line_no);

  std::vector<double> shift(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(dim));
  Matrix rot(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) rot(i, j) = values[dim + i * dim + j];

  // M * M^T must be I within 1e-9 per entry.
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < dim; ++k) acc += rot(i, k) * rot(j, k);
      double want = i == j ? 1.0 : 0.0;
      if (std::abs(acc - want) > 1e-9)
        throw ValidationError("load_shift_rotate: rotation matrix is not orthonormal");
    }
  return {std::move(shift), std::move(rot)};
}

namespace {

double sphere(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

double ellipsoid(std::span<const double> x) {
  // Condition number 1e6 spread geometrically across dimensions.
  const double n = static_cast<double>(x.size());
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double w = x.size() == 1 ? 1.0 : std::pow(1e6, static_cast<double>(i) / (n - 1.0));
    s += w * x[i] * x[i];
  }
  return s;
}

double rosenbrock(std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    double a = x[i + 1] - x[i] * x[i];
    double b = 1.0 - x[i];
    s += 100.0 * a * a + b * b;
  }
  return s;
}

double rastrigin(std::span<const double> x) {
  double s = 10.0 * static_cast<double>(x.size());
  for (double v : x) s += v * v - 10.0 * std::cos(2.0 * std::numbers::pi * v);
  return s;
}

double ackley(std::span<const double> x) {
  double sq = 0.0, cs = 0.0;
  for (double v : x) {
    sq += v * v;
    cs += std::cos(2.0 * std::numbers::pi * v);
  }
  const double n = static_cast<double>(x.size());
  return -20.0 * std::exp(-0.2 * std::sqrt(sq / n)) - std::exp(cs / n) + 20.0 + std::numbers::e;
}

double griewank(std::span<const double> x) {
  double s = 0.0, p = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += x[i] * x[i] / 4000.0;
    p *= std::cos(x[i] / std::sqrt(static_cast<double>(i + 1)));
  }
  return s - p + 1.0;
}

double schwefel12(std::span<const double> x) {
  // Schwefel 1.2: sum of squared prefix sums.
  double s = 0.0, prefix = 0.0;
  for (double v : x) {
    prefix += v;
    s += prefix * prefix;
  }
  return s;
}

std::shared_ptr<Problem> builtin(const std::string& name, std::size_t dim,
                                 double (*fn)(std::span<const double>)) {
  return std::make_shared<FunctionProblem>(name, Bounds::uniform(dim, -100.0, 100.0), 0.0, fn);
}

}  // namespace

std::shared_ptr<Problem> make_builtin(const std::string& name, std::size_t dim) {
  if (name == "sphere") return builtin(name, dim, sphere);
  if (name == "ellipsoid") return builtin(name, dim, ellipsoid);
  if (name == "rosenbrock") return builtin(name, dim, rosenbrock);
  if (name == "rastrigin") return builtin(name, dim, rastrigin);
  if (name == "ackley") return builtin(name, dim, ackley);
  if (name == "griewank") return builtin(name, dim, griewank);
  if (name == "schwefel12") return builtin(name, dim, schwefel12);
  return nullptr;
}

std::vector<std::shared_ptr<Problem>> builtin_suite(std::size_t dim) {
  if (dim < 2) throw std::invalid_argument("builtin_suite: dimension must be >= 2");
  std::vector<std::shared_ptr<Problem>> suite;
  for (const char* name :
       {"sphere", "ellipsoid", "rosenbrock", "rastrigin", "ackley", "griewank", "schwefel12"})
    suite.push_back(make_builtin(name, dim));
  return suite;
}

}  // namespace mlshade
