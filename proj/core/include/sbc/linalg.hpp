#pragma once

#include <cstddef>
#include <vector>

namespace sbc {

// Small dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix multiply(const Matrix& a, const Matrix& b);

// Row vector times matrix: v^T M.
std::vector<double> row_times(const std::vector<double>& v, const Matrix& m);

// Matrix times column vector.
std::vector<double> times(const Matrix& m, const std::vector<double>& v);

// Solves A x = b by Gaussian elimination with partial pivoting.
// Throws NumericError if a pivot falls below `singular_tolerance` times the
// largest absolute entry of A.
std::vector<double> solve(Matrix a, std::vector<double> b,
                          double singular_tolerance = 1e-14);

}  // namespace sbc
