#pragma once

// Solver invariant measurements used by `krylov selftest`. Everything here
// recomputes from the state with the sequential reference kernels.

#include <vector>

#include "krylov/gmres.hpp"

namespace krylov::cli {

/// ||A V_j - V_{j+1} H_j||_F using the pre-rotation Hessenberg.
double arnoldi_relation_error(const DenseMatrix& a, const KrylovState& state);

/// max |<v_i, v_k> - delta_ik| over the current basis.
double orthonormality_error(const KrylovState& state);

/// Records invariant errors across a solve.
class InvariantRecorder : public SolveObserver {
 public:
  void after_step(const DenseMatrix& a, const Vector& b, const Vector& cycle_x0,
                  const KrylovState& state) override;
  void at_cycle_end(const DenseMatrix& a, const Vector& b, const KrylovState& state,
                    const Vector& x, double residual) override;

  double max_arnoldi_error = 0.0;
  double max_orthonormality_error = 0.0;
  /// max | |g_{j+1}| - ||b - A x_j|| | over all inner steps.
  double max_estimate_gap = 0.0;
  std::size_t cycles = 0;
};

}  // namespace krylov::cli
