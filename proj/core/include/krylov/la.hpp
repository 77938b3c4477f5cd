#pragma once

// Dense double-precision vector/matrix value types and the reference
// (sequential) BLAS level-1/level-2 kernels.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace krylov {

/// Thrown when operand shapes do not agree. The message carries both shapes.
class DimensionMismatch : public std::invalid_argument {
 public:
  DimensionMismatch(const std::string& op, std::size_t lhs_rows,
                    std::size_t lhs_cols, std::size_t rhs_rows,
                    std::size_t rhs_cols);
  DimensionMismatch(const std::string& op, std::size_t lhs_len,
                    std::size_t rhs_len);
};

class Vector {
 public:
  /// Zero-filled (or `fill`-filled) vector of length n. Requires n >= 1.
  explicit Vector(std::size_t n, double fill = 0.0);
  /// Takes ownership of user data. Rejects empty input and non-finite entries.
  explicit Vector(std::vector<double> values);
  Vector(std::initializer_list<double> values);

  std::size_t size() const noexcept { return data_.size(); }

  double operator[](std::size_t i) const noexcept { return data_[i]; }
  double& operator[](std::size_t i) noexcept { return data_[i]; }

  std::span<const double> values() const noexcept { return data_; }
  std::span<double> values() noexcept { return data_; }
  const double* data() const noexcept { return data_.data(); }
  double* data() noexcept { return data_.data(); }

  const std::vector<double>& storage() const noexcept { return data_; }

  friend bool operator==(const Vector&, const Vector&) = default;

 private:
  std::vector<double> data_;
};

/// Row-major dense matrix.
class DenseMatrix {
 public:
  DenseMatrix(std::size_t rows, std::size_t cols);
  /// Row-major data; rejects a size mismatch and non-finite entries.
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  /// Nested rows, e.g. {{1, 2}, {3, 4}}.
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t element_count() const noexcept { return data_.size(); }
  bool is_square() const noexcept { return rows_ == cols_; }

  double operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * cols_ + j];
  }
  double& operator()(std::size_t i, std::size_t j) noexcept {
    return data_[i * cols_ + j];
  }

  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<const double> values() const noexcept { return data_; }
  const double* data() const noexcept { return data_.data(); }

  double frobenius_norm() const noexcept;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

// Reference kernels. Reductions accumulate strictly left to right, so the
// result is a pure function of the inputs.

Vector matvec(const DenseMatrix& a, const Vector& x);
double dot(const Vector& u, const Vector& v);
/// sqrt(dot(v, v)); no overflow-avoiding rescaling.
double norm2(const Vector& v);
Vector axpy(double alpha, const Vector& x, const Vector& y);
Vector scale(double alpha, const Vector& v);

namespace kernels {

// Span-level building blocks shared by the backends.
double dot(std::span<const double> u, std::span<const double> v) noexcept;
void axpy(double alpha, std::span<const double> x,
          std::span<double> y) noexcept;
void scale(double alpha, std::span<double> v) noexcept;
/// y[i] = row_i(a) . x for rows [row_begin, row_end).
void matvec_rows(const DenseMatrix& a, std::span<const double> x,
                 std::span<double> y, std::size_t row_begin,
                 std::size_t row_end) noexcept;

}  // namespace kernels

}  // namespace krylov
