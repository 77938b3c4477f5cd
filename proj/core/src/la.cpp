#include "krylov/la.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace krylov {

namespace {

void require_finite(std::span<const double> values, const char* what) {
  auto it = std::find_if(values.begin(), values.end(),
                         [](double v) { return !std::isfinite(v); });
  if (it != values.end()) {
    std::ostringstream os;
    os << what << ": non-finite entry at index " << (it - values.begin());
    throw std::invalid_argument(os.str());
  }
}

std::string shape_message(const std::string& op, std::size_t lr,
                          std::size_t lc, std::size_t rr, std::size_t rc) {
  std::ostringstream os;
  os << op << ": dimension mismatch (" << lr << "x" << lc << " vs " << rr
     << "x" << rc << ")";
  return os.str();
}

std::string length_message(const std::string& op, std::size_t l,
                           std::size_t r) {
  std::ostringstream os;
  os << op << ": length mismatch (" << l << " vs " << r << ")";
  return os.str();
}

}  // namespace

DimensionMismatch::DimensionMismatch(const std::string& op,
                                     std::size_t lhs_rows,
                                     std::size_t lhs_cols,
                                     std::size_t rhs_rows,
                                     std::size_t rhs_cols)
    : std::invalid_argument(
          shape_message(op, lhs_rows, lhs_cols, rhs_rows, rhs_cols)) {}

DimensionMismatch::DimensionMismatch(const std::string& op,
                                     std::size_t lhs_len, std::size_t rhs_len)
    : std::invalid_argument(length_message(op, lhs_len, rhs_len)) {}

// ---------------------------------------------------------------- Vector

Vector::Vector(std::size_t n, double fill) : data_(n, fill) {
  if (n == 0) throw std::invalid_argument("Vector: length must be >= 1");
  if (!std::isfinite(fill))
    throw std::invalid_argument("Vector: non-finite fill value");
}

Vector::Vector(std::vector<double> values) : data_(std::move(values)) {
  if (data_.empty()) throw std::invalid_argument("Vector: length must be >= 1");
  require_finite(data_, "Vector");
}

Vector::Vector(std::initializer_list<double> values)
    : Vector(std::vector<double>(values)) {}

// ----------------------------------------------------------- DenseMatrix

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
  if (rows == 0 || cols == 0)
    throw std::invalid_argument("DenseMatrix: dimensions must be >= 1");
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols,
                         std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (rows == 0 || cols == 0)
    throw std::invalid_argument("DenseMatrix: dimensions must be >= 1");
  if (data_.size() != rows * cols)
    throw DimensionMismatch("DenseMatrix", rows * cols, data_.size());
  require_finite(data_, "DenseMatrix");
}

DenseMatrix::DenseMatrix(
    std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  if (rows_ == 0 || cols_ == 0)
    throw std::invalid_argument("DenseMatrix: dimensions must be >= 1");
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionMismatch("DenseMatrix", cols_, r.size());
    data_.insert(data_.end(), r.begin(), r.end());
  }
  require_finite(data_, "DenseMatrix");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

double DenseMatrix::frobenius_norm() const noexcept {
  return std::sqrt(kernels::dot(data_, data_));
}

// --------------------------------------------------------------- kernels

namespace kernels {

double dot(std::span<const double> u, std::span<const double> v) noexcept {
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) sum += u[i] * v[i];
  return sum;
}

void axpy(double alpha, std::span<const double> x,
          std::span<double> y) noexcept {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void scale(double alpha, std::span<double> v) noexcept {
  for (double& e : v) e *= alpha;
}

void matvec_rows(const DenseMatrix& a, std::span<const double> x,
                 std::span<double> y, std::size_t row_begin,
                 std::size_t row_end) noexcept {
  for (std::size_t i = row_begin; i < row_end; ++i) y[i] = dot(a.row(i), x);
}

}  // namespace kernels

Vector matvec(const DenseMatrix& a, const Vector& x) {
  if (a.cols() != x.size())
    throw DimensionMismatch("matvec", a.rows(), a.cols(), x.size(), 1);
  Vector y(a.rows());
  kernels::matvec_rows(a, x.values(), y.values(), 0, a.rows());
  return y;
}

double dot(const Vector& u, const Vector& v) {
  if (u.size() != v.size()) throw DimensionMismatch("dot", u.size(), v.size());
  return kernels::dot(u.values(), v.values());
}

double norm2(const Vector& v) { return std::sqrt(kernels::dot(v.values(), v.values())); }

Vector axpy(double alpha, const Vector& x, const Vector& y) {
  if (x.size() != y.size()) throw DimensionMismatch("axpy", x.size(), y.size());
  Vector out = y;
  kernels::axpy(alpha, x.values(), out.values());
  return out;
}

Vector scale(double alpha, const Vector& v) {
  Vector out = v;
  kernels::scale(alpha, out.values());
  return out;
}

}  // namespace krylov
