// Kernel and solver microbenchmarks per backend.

#include <benchmark/benchmark.h>

#include "krylov/backend.hpp"
#include "krylov/bench.hpp"
#include "krylov/gmres.hpp"
#include "krylov/rng.hpp"

namespace {

using namespace krylov;

Vector random_vector(std::size_t n, std::uint64_t seed) {
  NormalSampler normal(seed);
  Vector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = normal();
  return v;
}

BackendId backend_arg(const benchmark::State& state) {
  return static_cast<BackendId>(state.range(0));
}

void BM_Dot(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(1));
  auto backend = make_backend(backend_arg(state));
  const Vector u = random_vector(n, 1);
  const Vector v = random_vector(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(backend->dot(u, v));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * 2 * n * sizeof(double)));
  state.SetLabel(std::string(to_string(backend_arg(state))));
}

void BM_Axpy(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(1));
  auto backend = make_backend(backend_arg(state));
  const Vector x = random_vector(n, 1);
  Vector y = random_vector(n, 2);
  for (auto _ : state) {
    backend->axpy(1e-9, x, y);
    benchmark::ClobberMemory();
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * 3 * n * sizeof(double)));
  state.SetLabel(std::string(to_string(backend_arg(state))));
}

void BM_Matvec(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(1));
  auto backend = make_backend(backend_arg(state));
  const Problem p = generate_problem(n, 42);
  for (auto _ : state) benchmark::DoNotOptimize(backend->matvec(p.a, p.x_true));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * 2 * n * n));
  state.SetLabel(std::string(to_string(backend_arg(state))));
}

void BM_GmresSolve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(1));
  const BackendId id = backend_arg(state);
  auto backend = make_backend(id);
  const Problem p = generate_problem(n, 42);
  DispatchPolicy policy;
  policy.enabled_backend = id;
  std::size_t iterations = 0;
  for (auto _ : state) {
    const GmresResult r = gmres_solve(p.a, p.b, Vector(n), GmresConfig{}, *backend, policy);
    iterations = r.inner_iterations;
    benchmark::DoNotOptimize(r.x.data());
  }
  state.counters["inner_iterations"] = static_cast<double>(iterations);
  state.SetLabel(std::string(to_string(id)));
}

void backend_sizes(benchmark::internal::Benchmark* b, std::initializer_list<std::int64_t> sizes) {
  for (int id = 0; id < 3; ++id)
    for (std::int64_t n : sizes) b->Args({id, n});
}

BENCHMARK(BM_Dot)->Apply([](auto* b) { backend_sizes(b, {1 << 10, 1 << 16, 1 << 20}); });
BENCHMARK(BM_Axpy)->Apply([](auto* b) { backend_sizes(b, {1 << 10, 1 << 16, 1 << 20}); });
BENCHMARK(BM_Matvec)->Apply([](auto* b) { backend_sizes(b, {256, 1024, 2048}); });
BENCHMARK(BM_GmresSolve)
    ->Apply([](auto* b) { backend_sizes(b, {500, 1000}); })
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
