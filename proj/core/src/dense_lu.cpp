#include "krylov/dense_lu.hpp"

#include <cmath>
#include <utility>
#include <vector>

namespace krylov::reference {

Vector lu_solve(const DenseMatrix& a, const Vector& b) {
  if (!a.is_square() || b.size() != a.rows())
    throw DimensionMismatch("lu_solve", a.rows(), a.cols(), b.size(), 1);
  const std::size_t n = a.rows();

  std::vector<double> lu(a.values().begin(), a.values().end());
  std::vector<double> x(b.values().begin(), b.values().end());
  auto at = [&](std::size_t i, std::size_t j) -> double& { return lu[i * n + j]; };

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::fabs(at(i, k)) > std::fabs(at(pivot, k))) pivot = i;
    if (at(pivot, k) == 0.0) throw std::domain_error("lu_solve: singular matrix");
    if (pivot != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(at(k, j), at(pivot, j));
      std::swap(x[k], x[pivot]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double l = at(i, k) / at(k, k);
      at(i, k) = l;
      for (std::size_t j = k + 1; j < n; ++j) at(i, j) -= l * at(k, j);
      x[i] -= l * x[k];
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = x[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= at(i, j) * x[j];
    x[i] = s / at(i, i);
  }
  Vector out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i];
  return out;
}

}  // namespace krylov::reference
