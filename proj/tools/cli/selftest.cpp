#include <cmath>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <string>

#include "cli/cli.hpp"
#include "cli/invariants.hpp"
#include "krylov/bench.hpp"
#include "krylov/dense_lu.hpp"

namespace krylov::cli {

namespace {

struct Check {
  std::ostream& out;
  int failures = 0;

  void report(bool ok, const std::string& name, const std::string& detail) {
    out << (ok ? "PASS " : "FAIL ") << name << "  " << detail << "\n";
    if (!ok) ++failures;
  }
};

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

}  // namespace

int run_selftest(std::ostream& out) {
  Check check{out};
  const std::size_t sizes[] = {10, 50, 100};
  const BackendId backends[] = {BackendId::SerialHost, BackendId::ParallelHost,
                                BackendId::OffloadModel};

  GmresConfig config;
  config.tol = 1e-10;

  for (std::size_t n : sizes) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const Problem p = generate_problem(n, seed);
      const Vector x_lu = reference::lu_solve(p.a, p.b);
      const double a_norm = p.a.frobenius_norm();
      const double b_norm = norm2(p.b);

      for (BackendId id : backends) {
        auto backend = make_backend(id);
        InvariantRecorder rec;
        const GmresResult r = gmres_solve(p.a, p.b, Vector(n), config, *backend, &rec);
        const std::string tag = "n=" + std::to_string(n) + " seed=" + std::to_string(seed) +
                                " backend=" + std::string(to_string(id));

        const double rel_err = norm2(axpy(-1.0, x_lu, r.x)) / norm2(x_lu);
        check.report(r.status == SolveStatus::Converged && rel_err <= 1e-6,
                     "oracle-equivalence " + tag,
                     "status=" + std::string(to_string(r.status)) + " rel_err=" + sci(rel_err));
        check.report(rec.max_arnoldi_error <= 1e-10 * a_norm, "arnoldi-relation " + tag,
                     "err=" + sci(rec.max_arnoldi_error) + " bound=" + sci(1e-10 * a_norm));
        check.report(rec.max_estimate_gap <= 1e-8 * b_norm, "residual-estimate " + tag,
                     "gap=" + sci(rec.max_estimate_gap) + " bound=" + sci(1e-8 * b_norm));
      }

      // Plain MGS loses orthogonality as the residual converges; the
      // reorthogonalized basis must stay orthonormal to working precision.
      GmresConfig reorth = config;
      reorth.reorthogonalize = true;
      SerialHostBackend serial;
      InvariantRecorder rec;
      gmres_solve(p.a, p.b, Vector(n), reorth, serial, &rec);
      check.report(rec.max_orthonormality_error <= 1e-12,
                   "orthonormality-reorth n=" + std::to_string(n) +
                       " seed=" + std::to_string(seed),
                   "err=" + sci(rec.max_orthonormality_error));
    }
  }
  out << (check.failures == 0 ? "selftest passed" : "selftest FAILED") << " ("
      << check.failures << " failures)\n";
  return check.failures == 0 ? kExitOk : kExitFailure;
}

}  // namespace krylov::cli
