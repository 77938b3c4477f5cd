#pragma once

// Restarted GMRES(m) for dense nonsymmetric systems.
//
// Each cycle builds an Arnoldi basis with modified Gram-Schmidt, keeps the
// (m+1) x m Hessenberg least-squares problem in QR form through Givens
// rotations applied one column at a time, and recomputes the true residual
// b - A x at the cycle end before testing convergence.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "krylov/backend.hpp"
#include "krylov/la.hpp"

namespace krylov {

enum class ConvergenceCriterion {
  RelativeToB,  ///< ||r|| <= tol * ||b||
  Absolute,     ///< ||r|| <= tol
};

enum class SolveStatus { Converged, MaxRestartsExceeded, Breakdown };

std::string_view to_string(SolveStatus status) noexcept;
std::string_view to_string(ConvergenceCriterion criterion) noexcept;

struct GmresConfig {
  std::size_t restart_m = 30;
  double tol = 1e-8;
  ConvergenceCriterion criterion = ConvergenceCriterion::RelativeToB;
  /// Maximum number of restart cycles.
  std::size_t max_restarts = 1000;
  /// Happy breakdown when h(j+1,j) <= breakdown_tol * ||A v_j||.
  double breakdown_tol = 1e-14;
  /// Second Gram-Schmidt pass per Arnoldi step.
  bool reorthogonalize = false;

  void validate() const;
};

enum class ResidualKind {
  Initial,     ///< ||b - A x0|| before the first cycle
  Estimate,    ///< |g(j+1)| after an inner iteration
  Recomputed,  ///< true residual at a cycle boundary followed by a restart
};

struct ResidualRecord {
  double value;
  ResidualKind kind;
  std::size_t cycle;  ///< 1-based cycle; 0 for the initial record

  friend bool operator==(const ResidualRecord&, const ResidualRecord&) = default;
};

struct GmresResult {
  Vector x;
  std::vector<ResidualRecord> residual_history;
  std::size_t restarts_used = 0;  ///< cycles executed
  std::size_t inner_iterations = 0;
  std::size_t total_matvecs = 0;
  /// Recomputed ||b - A x|| for the returned x.
  double final_residual = 0.0;
  SolveStatus status = SolveStatus::Converged;
};

/// The rotated triangular block has a zero on its diagonal.
class SingularHessenberg : public std::runtime_error {
 public:
  explicit SingularHessenberg(std::size_t column);
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

/// Per-cycle workspace. Indices are 0-based: column k of the Hessenberg holds
/// rows 0..k+1, and g[j] is the current least-squares residual.
struct KrylovState {
  KrylovState(std::size_t n, std::size_t m);

  std::size_t n;
  std::size_t m;
  /// Orthonormal basis; j+1 vectors after a Continue step, j after breakdown.
  std::vector<Vector> basis;
  /// Column-major (m+1) x m, rotated in place by qr_update.
  std::vector<double> hessenberg;
  /// Pre-rotation copy of the Hessenberg, kept for invariant checks.
  std::vector<double> hessenberg_raw;
  std::vector<double> givens_c;
  std::vector<double> givens_s;
  std::vector<double> g;
  double beta = 0.0;
  /// Completed Hessenberg columns (Krylov dimension).
  std::size_t j = 0;
  bool breakdown = false;

  double& h(std::size_t row, std::size_t col) noexcept {
    return hessenberg[col * (m + 1) + row];
  }
  double h(std::size_t row, std::size_t col) const noexcept {
    return hessenberg[col * (m + 1) + row];
  }
  double h_raw(std::size_t row, std::size_t col) const noexcept {
    return hessenberg_raw[col * (m + 1) + row];
  }
  double residual_estimate() const noexcept { return std::abs(g[j]); }
};

/// Hooks for inspecting the solver between steps. Default no-ops.
class SolveObserver {
 public:
  virtual ~SolveObserver() = default;
  /// After arnoldi_step + qr_update. `cycle_x0` is the cycle's starting iterate.
  virtual void after_step(const DenseMatrix& /*a*/, const Vector& /*b*/,
                          const Vector& /*cycle_x0*/,
                          const KrylovState& /*state*/) {}
  /// After the cycle's true residual has been recomputed.
  virtual void at_cycle_end(const DenseMatrix& /*a*/, const Vector& /*b*/,
                            const KrylovState& /*state*/,
                            const Vector& /*x*/, double /*residual*/) {}
};

struct InitialResidual {
  Vector r0;
  double beta;
};

/// r0 = b - A x0, beta = ||r0||.
InitialResidual initial_residual(const DenseMatrix& a, const Vector& b,
                                 const Vector& x0, Dispatcher& exec);

/// Resets `state` for a new cycle: v1 = r0 / beta, g = beta e1, j = 0.
void start_cycle(KrylovState& state, const Vector& r0, double beta,
                 Dispatcher& exec);

enum class ArnoldiOutcome { Continue, HappyBreakdown };

/// Produces Hessenberg column state.j from A v_j and advances j.
ArnoldiOutcome arnoldi_step(const DenseMatrix& a, KrylovState& state,
                            Dispatcher& exec, const GmresConfig& config);

/// Rotates the newest Hessenberg column into triangular form and updates g.
/// Returns the least-squares residual estimate |g(j)|.
double qr_update(KrylovState& state);

/// Back substitution R y = g on the leading j x j rotated block.
/// Throws SingularHessenberg on a zero diagonal entry.
Vector solve_ls(const KrylovState& state);

/// x0 + sum_k y_k v_k.
Vector form_solution(const Vector& x0, const KrylovState& state,
                     const Vector& y, Dispatcher& exec);

/// Requires policy.enabled_backend == backend.id().
GmresResult gmres_solve(const DenseMatrix& a, const Vector& b,
                        const Vector& x0, const GmresConfig& config,
                        Backend& backend, const DispatchPolicy& policy,
                        SolveObserver* observer = nullptr);

/// Uses the default policy with enabled_backend = backend.id().
GmresResult gmres_solve(const DenseMatrix& a, const Vector& b,
                        const Vector& x0, const GmresConfig& config,
                        Backend& backend, SolveObserver* observer = nullptr);

}  // namespace krylov
