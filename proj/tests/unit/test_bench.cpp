#include <gtest/gtest.h>

#include <cmath>

#include "krylov/bench.hpp"
#include "krylov/dense_lu.hpp"

namespace krylov {
namespace {

TEST(GenerateProblem, Deterministic) {
  const Problem p1 = generate_problem(40, 17);
  const Problem p2 = generate_problem(40, 17);
  EXPECT_EQ(p1.a, p2.a);
  EXPECT_EQ(p1.b, p2.b);
  EXPECT_EQ(p1.x_true, p2.x_true);
  EXPECT_EQ(hash_matrix(p1.a), hash_matrix(p2.a));
  EXPECT_NE(hash_matrix(p1.a), hash_matrix(generate_problem(40, 18).a));
}

TEST(GenerateProblem, StrictlyDiagonallyDominant) {
  const Problem p = generate_problem(60, 3);
  for (std::size_t i = 0; i < 60; ++i) {
    double off = 0.0;
    for (std::size_t k = 0; k < 60; ++k)
      if (k != i) off += std::abs(p.a(i, k));
    EXPECT_GT(std::abs(p.a(i, i)), off);
  }
  EXPECT_EQ(p.b, matvec(p.a, p.x_true));
}

TEST(GenerateProblem, RejectsTinySizes) {
  EXPECT_THROW(generate_problem(1, 0), std::invalid_argument);
  EXPECT_THROW(generate_problem(0, 0), std::invalid_argument);
  EXPECT_NO_THROW(generate_problem(2, 0));
}

TEST(GenerateProblem, GmresRecoversTrueSolution) {
  const Problem p = generate_problem(200, 11);
  GmresConfig config;
  config.tol = 1e-10;
  SerialHostBackend backend;
  const GmresResult r = gmres_solve(p.a, p.b, Vector(200), config, backend);
  ASSERT_EQ(r.status, SolveStatus::Converged);
  EXPECT_LE(norm2(axpy(-1.0, p.x_true, r.x)), 1e-6 * norm2(p.x_true));
}

TEST(HashMatrix, SensitiveToShape) {
  EXPECT_NE(hash_matrix(DenseMatrix(2, 3)), hash_matrix(DenseMatrix(3, 2)));
}

TEST(Median, Examples) {
  EXPECT_EQ(median({3, 1, 2}), 2.0);
  EXPECT_EQ(median({5}), 5.0);
  EXPECT_EQ(median({4, 1, 3, 2}), 2.5);
  EXPECT_THROW(median({}), std::invalid_argument);
}

TEST(TimeSolve, SingleRepeatReturnsThatSample) {
  const Problem p = generate_problem(50, 1);
  SerialHostBackend backend;
  DispatchPolicy policy;
  policy.enabled_backend = BackendId::SerialHost;
  const TimingResult t = time_solve(p.a, p.b, GmresConfig{}, backend, policy, 1, 0);
  ASSERT_EQ(t.samples.size(), 1u);
  EXPECT_EQ(t.median_seconds, t.samples[0]);
  EXPECT_GT(t.inner_iterations, 0u);
  EXPECT_EQ(backend.stats_snapshot().matvec_count, 1 + t.inner_iterations + t.restarts);
}

TEST(TimeSolve, WarmupIsUntimed) {
  const Problem p = generate_problem(30, 2);
  SerialHostBackend backend;
  DispatchPolicy policy;
  policy.enabled_backend = BackendId::SerialHost;
  const TimingResult t = time_solve(p.a, p.b, GmresConfig{}, backend, policy, 3, 2);
  EXPECT_EQ(t.samples.size(), 3u);
  EXPECT_EQ(t.median_seconds, median(t.samples));
}

TEST(TimeSolve, NonConvergenceThrowsWithStatus) {
  const Problem p = generate_problem(30, 2);
  SerialHostBackend backend;
  DispatchPolicy policy;
  policy.enabled_backend = BackendId::SerialHost;
  GmresConfig config;
  config.tol = 1e-30;
  config.max_restarts = 1;
  try {
    time_solve(p.a, p.b, config, backend, policy, 1, 0);
    FAIL() << "expected SolveFailed";
  } catch (const SolveFailed& e) {
    EXPECT_EQ(e.status(), SolveStatus::MaxRestartsExceeded);
  }
  EXPECT_THROW(time_solve(p.a, p.b, GmresConfig{}, backend, policy, 0, 0), std::invalid_argument);
}

TEST(RunBenchmark, RowsSortedAndSpeedupsExact) {
  BenchSpec spec;
  spec.sizes = {120, 40, 80};
  spec.backends = {BackendId::SerialHost, BackendId::ParallelHost, BackendId::OffloadModel};
  spec.repeats = 3;
  spec.warmup = 0;
  spec.workers = 2;
  std::vector<std::string> log;
  const SpeedupTable t = run_benchmark(spec, [&](const std::string& m) { log.push_back(m); });
  EXPECT_FALSE(log.empty());
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_EQ(t.backends, spec.backends);
  EXPECT_TRUE(t.all_valid());
  const std::size_t expected_n[] = {40, 80, 120};
  for (std::size_t i = 0; i < 3; ++i) {
    const SpeedupRow& row = t.rows[i];
    EXPECT_EQ(row.n, expected_n[i]);
    EXPECT_EQ(row.matrix_hash, hash_matrix(generate_problem(row.n, spec.seed).a));
    EXPECT_GT(row.iterations, 0u);
    EXPECT_LE(row.final_residual, spec.solver.tol * norm2(generate_problem(row.n, spec.seed).b));
    ASSERT_EQ(row.backends.size(), 3u);
    for (const BackendTiming& bt : row.backends) {
      EXPECT_GT(bt.seconds, 0.0);
      EXPECT_EQ(bt.speedup, row.t_serial / bt.seconds);
    }
  }
}

TEST(RunBenchmark, SerialSelfSpeedupNearOne) {
  BenchSpec spec;
  spec.sizes = {300};
  spec.backends = {BackendId::SerialHost};
  spec.repeats = 7;
  spec.warmup = 1;
  const SpeedupTable t = run_benchmark(spec);
  ASSERT_TRUE(t.all_valid());
  const double s = t.rows[0].backends[0].speedup;
  EXPECT_GE(s, 0.8);
  EXPECT_LE(s, 1.25);
}

TEST(RunBenchmark, FailedRowsCarryErrors) {
  BenchSpec spec;
  spec.sizes = {20, 30};
  spec.backends = {BackendId::ParallelHost};
  spec.repeats = 1;
  spec.warmup = 0;
  spec.solver.tol = 1e-30;
  spec.solver.max_restarts = 1;
  const SpeedupTable t = run_benchmark(spec);
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_FALSE(t.all_valid());
  for (const SpeedupRow& row : t.rows) {
    EXPECT_FALSE(row.ok());
    EXPECT_NE(row.error.find("MaxRestartsExceeded"), std::string::npos) << row.error;
    EXPECT_EQ(row.error.find(','), std::string::npos);
    EXPECT_NE(row.matrix_hash, 0u);
  }
}

TEST(BenchSpec, Defaults) {
  const BenchSpec spec;
  ASSERT_EQ(spec.sizes.size(), 10u);
  for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(spec.sizes[i], 1000 * (i + 1));
  EXPECT_NO_THROW(spec.validate());
  BenchSpec bad;
  bad.sizes = {};
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad.sizes = {1};
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace krylov
