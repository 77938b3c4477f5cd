#include "krylov/gmres.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace krylov {

std::string_view to_string(SolveStatus status) noexcept {
  switch (status) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::MaxRestartsExceeded: return "MaxRestartsExceeded";
    case SolveStatus::Breakdown: return "Breakdown";
  }
  return "Unknown";
}

std::string_view to_string(ConvergenceCriterion criterion) noexcept {
  return criterion == ConvergenceCriterion::RelativeToB ? "rel" : "abs";
}

void GmresConfig::validate() const {
  if (restart_m < 1) throw std::invalid_argument("GmresConfig: restart_m must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("GmresConfig: tol must be > 0");
  if (max_restarts < 1)
    throw std::invalid_argument("GmresConfig: max_restarts must be >= 1");
  if (!(breakdown_tol >= 0.0))
    throw std::invalid_argument("GmresConfig: breakdown_tol must be >= 0");
}

SingularHessenberg::SingularHessenberg(std::size_t column)
    : std::runtime_error("singular Hessenberg: zero diagonal in rotated column " +
                         std::to_string(column)),
      column_(column) {}

KrylovState::KrylovState(std::size_t n_, std::size_t m_)
    : n(n_),
      m(m_),
      hessenberg((m_ + 1) * m_, 0.0),
      hessenberg_raw((m_ + 1) * m_, 0.0),
      givens_c(m_, 1.0),
      givens_s(m_, 0.0),
      g(m_ + 1, 0.0) {
  if (n_ == 0 || m_ == 0)
    throw std::invalid_argument("KrylovState: n and m must be >= 1");
  basis.reserve(m_ + 1);
}

InitialResidual initial_residual(const DenseMatrix& a, const Vector& b,
                                 const Vector& x0, Dispatcher& exec) {
  if (!a.is_square())
    throw DimensionMismatch("initial_residual", a.rows(), a.cols(), a.cols(),
                            a.cols());
  if (b.size() != a.rows())
    throw DimensionMismatch("initial_residual", a.rows(), a.cols(), b.size(), 1);
  if (x0.size() != a.cols())
    throw DimensionMismatch("initial_residual", a.rows(), a.cols(), x0.size(), 1);

  Vector ax = exec.matvec(a, x0);
  Vector r = b;
  exec.axpy(-1.0, ax, r);
  const double beta = exec.norm2(r);
  return {std::move(r), beta};
}

void start_cycle(KrylovState& state, const Vector& r0, double beta,
                 Dispatcher& exec) {
  if (r0.size() != state.n)
    throw DimensionMismatch("start_cycle", state.n, r0.size());
  if (!(beta > 0.0))
    throw std::invalid_argument("start_cycle: beta must be > 0");

  std::fill(state.hessenberg.begin(), state.hessenberg.end(), 0.0);
  std::fill(state.hessenberg_raw.begin(), state.hessenberg_raw.end(), 0.0);
  std::fill(state.givens_c.begin(), state.givens_c.end(), 1.0);
  std::fill(state.givens_s.begin(), state.givens_s.end(), 0.0);
  std::fill(state.g.begin(), state.g.end(), 0.0);
  state.g[0] = beta;
  state.beta = beta;
  state.j = 0;
  state.breakdown = false;

  state.basis.clear();
  Vector v1 = r0;
  exec.scale(1.0 / beta, v1);
  state.basis.push_back(std::move(v1));
}

ArnoldiOutcome arnoldi_step(const DenseMatrix& a, KrylovState& state,
                            Dispatcher& exec, const GmresConfig& config) {
  if (state.j >= state.m || state.breakdown || state.basis.size() != state.j + 1)
    throw std::logic_error("arnoldi_step: state is not ready for another step");

  const std::size_t col = state.j;
  Vector w = exec.matvec(a, state.basis[col]);
  const double av_norm = exec.norm2(w);

  // Modified Gram-Schmidt against v_0..v_col.
  for (std::size_t i = 0; i <= col; ++i) {
    const double hij = exec.dot(w, state.basis[i]);
    state.h(i, col) = hij;
    exec.axpy(-hij, state.basis[i], w);
  }
  if (config.reorthogonalize) {
    for (std::size_t i = 0; i <= col; ++i) {
      const double correction = exec.dot(w, state.basis[i]);
      state.h(i, col) += correction;
      exec.axpy(-correction, state.basis[i], w);
    }
  }

  const double subdiag = exec.norm2(w);
  const bool happy = subdiag <= config.breakdown_tol * av_norm;
  state.h(col + 1, col) = happy ? 0.0 : subdiag;
  for (std::size_t i = 0; i <= col + 1; ++i)
    state.hessenberg_raw[col * (state.m + 1) + i] = state.h(i, col);

  state.j = col + 1;
  if (happy) {
    state.breakdown = true;
    return ArnoldiOutcome::HappyBreakdown;
  }
  exec.scale(1.0 / subdiag, w);
  state.basis.push_back(std::move(w));
  return ArnoldiOutcome::Continue;
}

double qr_update(KrylovState& state) {
  if (state.j == 0) throw std::logic_error("qr_update: no Hessenberg column yet");
  const std::size_t k = state.j - 1;

  for (std::size_t i = 0; i < k; ++i) {
    const double c = state.givens_c[i];
    const double s = state.givens_s[i];
    const double upper = state.h(i, k);
    const double lower = state.h(i + 1, k);
    state.h(i, k) = c * upper + s * lower;
    state.h(i + 1, k) = -s * upper + c * lower;
  }

  const double diag = state.h(k, k);
  const double sub = state.h(k + 1, k);
  const double r = std::hypot(diag, sub);
  double c = 1.0;
  double s = 0.0;
  if (r != 0.0) {
    c = diag / r;
    s = sub / r;
  }
  state.givens_c[k] = c;
  state.givens_s[k] = s;
  state.h(k, k) = r;
  state.h(k + 1, k) = 0.0;

  const double gk = state.g[k];
  const double gk1 = state.g[k + 1];
  state.g[k] = c * gk + s * gk1;
  state.g[k + 1] = -s * gk + c * gk1;
  return std::abs(state.g[k + 1]);
}

Vector solve_ls(const KrylovState& state) {
  const std::size_t j = state.j;
  if (j == 0) throw std::logic_error("solve_ls: empty Krylov space");
  Vector y(j);
  for (std::size_t ii = j; ii-- > 0;) {
    const double diag = state.h(ii, ii);
    if (diag == 0.0) throw SingularHessenberg(ii);
    double sum = state.g[ii];
    for (std::size_t k = ii + 1; k < j; ++k) sum -= state.h(ii, k) * y[k];
    y[ii] = sum / diag;
  }
  return y;
}

Vector form_solution(const Vector& x0, const KrylovState& state,
                     const Vector& y, Dispatcher& exec) {
  if (y.size() != state.j) throw DimensionMismatch("form_solution", state.j, y.size());
  if (x0.size() != state.n) throw DimensionMismatch("form_solution", state.n, x0.size());
  Vector x = x0;
  for (std::size_t k = 0; k < state.j; ++k) exec.axpy(y[k], state.basis[k], x);
  return x;
}

namespace {

double convergence_target(const GmresConfig& config, double b_norm) {
  return config.criterion == ConvergenceCriterion::RelativeToB
             ? config.tol * b_norm
             : config.tol;
}

}  // namespace

GmresResult gmres_solve(const DenseMatrix& a, const Vector& b,
                        const Vector& x0, const GmresConfig& config,
                        Backend& backend, const DispatchPolicy& policy,
                        SolveObserver* observer) {
  config.validate();
  if (!a.is_square())
    throw DimensionMismatch("gmres_solve", a.rows(), a.cols(), a.cols(), a.cols());
  if (b.size() != a.rows())
    throw DimensionMismatch("gmres_solve", a.rows(), a.cols(), b.size(), 1);
  if (x0.size() != a.cols())
    throw DimensionMismatch("gmres_solve", a.rows(), a.cols(), x0.size(), 1);

  Dispatcher exec(backend, policy);
  exec.begin_solve();

  const std::size_t n = a.rows();
  const double target = convergence_target(config, exec.norm2(b));

  GmresResult result{x0, {}, 0, 0, 0, 0.0, SolveStatus::Converged};
  auto [r, beta] = initial_residual(a, b, x0, exec);
  result.total_matvecs = 1;
  result.residual_history.push_back({beta, ResidualKind::Initial, 0});
  result.final_residual = beta;
  if (beta <= target) return result;

  // A Krylov space of R^n has at most n dimensions.
  KrylovState state(n, std::min(config.restart_m, n));
  Vector x = x0;
  Vector best_x = x0;
  double best_residual = beta;

  for (std::size_t cycle = 1; cycle <= config.max_restarts; ++cycle) {
    start_cycle(state, r, beta, exec);
    result.restarts_used = cycle;

    ArnoldiOutcome outcome = ArnoldiOutcome::Continue;
    while (state.j < state.m) {
      outcome = arnoldi_step(a, state, exec, config);
      ++result.inner_iterations;
      ++result.total_matvecs;
      const double estimate = qr_update(state);
      result.residual_history.push_back({estimate, ResidualKind::Estimate, cycle});
      if (observer) observer->after_step(a, b, x, state);
      if (outcome == ArnoldiOutcome::HappyBreakdown || estimate <= target) break;
    }

    Vector y(1);
    try {
      y = solve_ls(state);
    } catch (const SingularHessenberg&) {
      result.x = best_x;
      result.final_residual = best_residual;
      result.status = SolveStatus::Breakdown;
      return result;
    }
    x = form_solution(x, state, y, exec);

    Vector ax = exec.matvec(a, x);
    ++result.total_matvecs;
    r = b;
    exec.axpy(-1.0, ax, r);
    beta = exec.norm2(r);
    if (observer) observer->at_cycle_end(a, b, state, x, beta);

    if (beta < best_residual || beta <= target) {
      best_residual = beta;
      best_x = x;
    }

    SolveStatus status = SolveStatus::Converged;
    bool done = true;
    if (beta <= target) {
      status = SolveStatus::Converged;
    } else if (outcome == ArnoldiOutcome::HappyBreakdown) {
      status = SolveStatus::Breakdown;
    } else if (cycle == config.max_restarts) {
      status = SolveStatus::MaxRestartsExceeded;
    } else {
      done = false;
    }
    if (done) {
      result.x = best_x;
      result.final_residual = best_residual;
      result.status = status;
      return result;
    }
    result.residual_history.push_back({beta, ResidualKind::Recomputed, cycle});
  }

  result.x = best_x;
  result.final_residual = best_residual;
  result.status = SolveStatus::Breakdown;
  return result;
}

GmresResult gmres_solve(const DenseMatrix& a, const Vector& b,
                        const Vector& x0, const GmresConfig& config,
                        Backend& backend, SolveObserver* observer) {
  DispatchPolicy policy;
  policy.enabled_backend = backend.id();
  return gmres_solve(a, b, x0, config, backend, policy, observer);
}

}  // namespace krylov
