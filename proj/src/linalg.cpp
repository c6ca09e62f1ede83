#include "mlshade/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mlshade/errors.hpp"

namespace mlshade {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix transpose(const Matrix& m) {
  Matrix t(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
  return t;
}

std::vector<double> transform(const Matrix& m, std::span<const double> x) {
  if (m.cols() != x.size()) throw std::invalid_argument("transform: dimension mismatch");
  std::vector<double> y(m.rows(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) acc += m(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

SymmetricMatrix::SymmetricMatrix(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("SymmetricMatrix: matrix not square");
  const std::size_t n = a.rows();
  entries_ = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      double v = 0.5 * (a(i, j) + a(j, i));
      entries_(i, j) = v;
      entries_(j, i) = v;
    }
}

SymmetricMatrix covariance(std::span<const std::vector<double>> points) {
  if (points.size() < 2) throw DegenerateInput("covariance: need at least 2 points");
  const std::size_t n = points.size();
  const std::size_t d = points[0].size();
  for (const auto& p : points)
    if (p.size() != d) throw std::invalid_argument("covariance: mixed dimensions");

  std::vector<double> mean(d, 0.0);
  for (const auto& p : points)
    for (std::size_t j = 0; j < d; ++j) mean[j] += p[j];
  for (auto& m : mean) m /= static_cast<double>(n);

  Matrix c(d, d);
  for (const auto& p : points)
    for (std::size_t i = 0; i < d; ++i) {
      double di = p[i] - mean[i];
      for (std::size_t j = 0; j <= i; ++j) c(i, j) += di * (p[j] - mean[j]);
    }
  const double denom = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      c(i, j) /= denom;
      c(j, i) = c(i, j);
    }
  return SymmetricMatrix(c);
}

namespace {

double max_off_diagonal(const Matrix& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j)));
  return m;
}

}  // namespace

EigenDecomposition eigen_symmetric(const SymmetricMatrix& c) {
  constexpr double kOffTol = 1e-12;
  constexpr int kMaxSweeps = 100;

  const std::size_t n = c.dim();
  Matrix a = c.entries();
  Matrix v = Matrix::identity(n);

  int sweep = 0;
  while (max_off_diagonal(a) >= kOffTol) {
    if (++sweep > kMaxSweeps) throw NumericalError("eigen_symmetric: Jacobi did not converge");
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double apq = a(p, q);
        if (std::abs(apq) < kOffTol) continue;
        double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double cs = 1.0 / std::sqrt(t * t + 1.0);
        double sn = t * cs;
        double tau = sn / (1.0 + cs);

        double app = a(p, p), aqq = a(q, q);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r != p && r != q) {
            double arp = a(r, p), arq = a(r, q);
            a(r, p) = arp - sn * (arq + tau * arp);
            a(p, r) = a(r, p);
            a(r, q) = arq + sn * (arp - tau * arq);
            a(q, r) = a(r, q);
          }
          double vrp = v(r, p), vrq = v(r, q);
          v(r, p) = vrp - sn * (vrq + tau * vrp);
          v(r, q) = vrq + sn * (vrp - tau * vrq);
        }
      }
    }
  }

  // Sort eigenpairs descending; fix each eigenvector's sign so results are
  // deterministic across runs.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

  EigenDecomposition dec;
  dec.eigenvalues.resize(n);
  dec.eigenvectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t src = order[k];
    dec.eigenvalues[k] = a(src, src);
    double sign = 1.0;
    for (std::size_t r = 0; r < n; ++r) {
      if (v(r, src) != 0.0) {
        sign = v(r, src) > 0.0 ? 1.0 : -1.0;
        break;
      }
    }
    for (std::size_t r = 0; r < n; ++r) dec.eigenvectors(r, k) = sign * v(r, src);
  }
  return dec;
}

}  // namespace mlshade
