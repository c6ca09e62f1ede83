#ifndef MLSHADE_LINALG_HPP
#define MLSHADE_LINALG_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace mlshade {

/// Dense row-major matrix, just large enough for rotations and covariances.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  static Matrix identity(std::size_t n);

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix transpose(const Matrix& m);

/// m * x. Throws std::invalid_argument on dimension mismatch.
std::vector<double> transform(const Matrix& m, std::span<const double> x);

/// Square matrix kept exactly symmetric by construction ((A + A^T) / 2).
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(const Matrix& a);

  std::size_t dim() const { return entries_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return entries_(i, j); }
  const Matrix& entries() const { return entries_; }

 private:
  Matrix entries_;
};

/// C = eigenvectors * diag(eigenvalues) * eigenvectors^T, eigenvalues sorted
/// descending, each eigenvector's first nonzero component nonnegative.
struct EigenDecomposition {
  Matrix eigenvectors;
  std::vector<double> eigenvalues;
};

/// Sample covariance (denominator n-1) of row vectors sharing one dimension.
/// Throws DegenerateInput for fewer than 2 points.
SymmetricMatrix covariance(std::span<const std::vector<double>> points);

/// Cyclic Jacobi. Sweeps until max |off-diagonal| < 1e-12, at most 100 sweeps;
/// throws NumericalError if the threshold is not reached.
EigenDecomposition eigen_symmetric(const SymmetricMatrix& c);

}  // namespace mlshade

#endif
