#include "cli/invariants.hpp"

#include <algorithm>
#include <cmath>

namespace krylov::cli {

double arnoldi_relation_error(const DenseMatrix& a, const KrylovState& state) {
  double sum_sq = 0.0;
  for (std::size_t k = 0; k < state.j; ++k) {
    Vector residual = matvec(a, state.basis[k]);
    for (std::size_t i = 0; i <= k + 1 && i < state.basis.size(); ++i)
      residual = axpy(-state.h_raw(i, k), state.basis[i], residual);
    sum_sq += dot(residual, residual);
  }
  return std::sqrt(sum_sq);
}

double orthonormality_error(const KrylovState& state) {
  double worst = 0.0;
  for (std::size_t i = 0; i < state.basis.size(); ++i)
    for (std::size_t k = i; k < state.basis.size(); ++k) {
      const double expected = i == k ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(dot(state.basis[i], state.basis[k]) - expected));
    }
  return worst;
}

void InvariantRecorder::after_step(const DenseMatrix& a, const Vector& b,
                                   const Vector& cycle_x0, const KrylovState& state) {
  Vector x = cycle_x0;
  try {
    const Vector y = solve_ls(state);
    for (std::size_t k = 0; k < state.j; ++k) x = axpy(y[k], state.basis[k], x);
  } catch (const SingularHessenberg&) {
    return;
  }
  const double explicit_residual = norm2(axpy(-1.0, matvec(a, x), b));
  max_estimate_gap =
      std::max(max_estimate_gap, std::abs(explicit_residual - state.residual_estimate()));
}

void InvariantRecorder::at_cycle_end(const DenseMatrix& a, const Vector&,
                                     const KrylovState& state, const Vector&, double) {
  ++cycles;
  max_arnoldi_error = std::max(max_arnoldi_error, arnoldi_relation_error(a, state));
  max_orthonormality_error = std::max(max_orthonormality_error, orthonormality_error(state));
}

}  // namespace krylov::cli
