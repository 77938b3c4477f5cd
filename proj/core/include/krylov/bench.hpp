#pragma once

// Benchmark harness: seeded test problems, median-of-repeats timing, and a
// speedup table comparing accelerated backends against the serial baseline.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "krylov/backend.hpp"
#include "krylov/gmres.hpp"
#include "krylov/la.hpp"

namespace krylov {

struct Problem {
  DenseMatrix a;
  Vector b;
  Vector x_true;
};

/// Strictly diagonally dominant nonsymmetric system, deterministic in
/// (n, seed). Off-diagonals are standard normal in row-major order, each
/// diagonal is the row's absolute off-diagonal sum plus one, x_true is
/// standard normal and b = A x_true. Requires n >= 2.
Problem generate_problem(std::size_t n, std::uint64_t seed);

/// FNV-1a over the matrix dimensions and the bytes of its entries.
std::uint64_t hash_matrix(const DenseMatrix& a) noexcept;

/// Median of a non-empty sample (mean of the middle pair for even sizes).
double median(std::vector<double> samples);

/// A timed solve did not converge, or repeats disagreed on iteration counts.
class SolveFailed : public std::runtime_error {
 public:
  SolveFailed(const std::string& what, SolveStatus status)
      : std::runtime_error(what), status_(status) {}
  SolveStatus status() const noexcept { return status_; }

 private:
  SolveStatus status_;
};

struct TimingResult {
  double median_seconds = 0.0;
  std::vector<double> samples;
  std::size_t inner_iterations = 0;
  std::size_t restarts = 0;
  double final_residual = 0.0;
};

/// Runs `warmup` untimed and `repeats` timed solves from x0 = 0. Only the
/// gmres_solve call sits inside the steady_clock window. Throws SolveFailed
/// unless every run converges with the same iteration count.
TimingResult time_solve(const DenseMatrix& a, const Vector& b,
                        const GmresConfig& config, Backend& backend,
                        const DispatchPolicy& policy, std::size_t repeats,
                        std::size_t warmup);

struct BenchSpec {
  std::vector<std::size_t> sizes = {1000, 2000, 3000, 4000, 5000,
                                    6000, 7000, 8000, 9000, 10000};
  std::vector<BackendId> backends = {BackendId::ParallelHost,
                                     BackendId::OffloadModel};
  std::size_t repeats = 5;
  std::size_t warmup = 1;
  std::uint64_t seed = 42;
  GmresConfig solver;
  std::size_t level1_threshold = DispatchPolicy{}.level1_threshold;
  /// Worker threads for the parallel backends; 0 = hardware concurrency.
  std::size_t workers = 0;

  void validate() const;
};

struct BackendTiming {
  BackendId backend;
  double seconds = 0.0;
  double speedup = 0.0;

  friend bool operator==(const BackendTiming&, const BackendTiming&) = default;
};

struct SpeedupRow {
  std::size_t n = 0;
  double t_serial = 0.0;
  std::vector<BackendTiming> backends;
  std::size_t iterations = 0;
  std::size_t restarts = 0;
  double final_residual = 0.0;
  std::uint64_t matrix_hash = 0;
  /// Empty for a valid row. Never contains commas or newlines.
  std::string error;

  bool ok() const noexcept { return error.empty(); }
  friend bool operator==(const SpeedupRow&, const SpeedupRow&) = default;
};

struct SpeedupTable {
  std::vector<BackendId> backends;
  std::vector<SpeedupRow> rows;

  bool all_valid() const noexcept;
  friend bool operator==(const SpeedupTable&, const SpeedupTable&) = default;
};

using BenchLog = std::function<void(const std::string&)>;

/// One problem per size; serial baseline then each requested backend on the
/// identical instance. Rows are sorted by n; failures are recorded per row.
SpeedupTable run_benchmark(const BenchSpec& spec, const BenchLog& log = {});

}  // namespace krylov
