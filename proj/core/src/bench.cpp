#include "krylov/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <sstream>

#include "krylov/rng.hpp"

namespace krylov {

Problem generate_problem(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("generate_problem: n must be >= 2");

  NormalSampler normal(seed);
  DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double off_sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i) continue;
      const double v = normal();
      a(i, k) = v;
      off_sum += std::abs(v);
    }
    a(i, i) = off_sum + 1.0;
  }
  Vector x_true(n);
  for (std::size_t i = 0; i < n; ++i) x_true[i] = normal();
  Vector b = matvec(a, x_true);
  return {std::move(a), std::move(b), std::move(x_true)};
}

std::uint64_t hash_matrix(const DenseMatrix& a) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const void* bytes, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(bytes);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 0x100000001b3ULL;
    }
  };
  const std::uint64_t dims[2] = {a.rows(), a.cols()};
  mix(dims, sizeof(dims));
  mix(a.data(), a.element_count() * sizeof(double));
  return h;
}

double median(std::vector<double> samples) {
  if (samples.empty()) throw std::invalid_argument("median: empty sample");
  std::sort(samples.begin(), samples.end());
  const std::size_t mid = samples.size() / 2;
  if (samples.size() % 2 == 1) return samples[mid];
  return 0.5 * (samples[mid - 1] + samples[mid]);
}

TimingResult time_solve(const DenseMatrix& a, const Vector& b,
                        const GmresConfig& config, Backend& backend,
                        const DispatchPolicy& policy, std::size_t repeats,
                        std::size_t warmup) {
  if (repeats < 1) throw std::invalid_argument("time_solve: repeats must be >= 1");

  const Vector x0(a.cols());
  TimingResult timing;
  bool have_reference = false;

  auto check = [&](const GmresResult& r) {
    if (r.status != SolveStatus::Converged) {
      std::ostringstream os;
      os << to_string(backend.id()) << " solve did not converge (status "
         << to_string(r.status) << ")";
      throw SolveFailed(os.str(), r.status);
    }
    if (!have_reference) {
      timing.inner_iterations = r.inner_iterations;
      timing.restarts = r.restarts_used;
      timing.final_residual = r.final_residual;
      have_reference = true;
    } else if (r.inner_iterations != timing.inner_iterations) {
      std::ostringstream os;
      os << to_string(backend.id()) << " repeats disagree on iterations ("
         << timing.inner_iterations << " vs " << r.inner_iterations << ")";
      throw SolveFailed(os.str(), r.status);
    }
  };

  for (std::size_t i = 0; i < warmup; ++i)
    check(gmres_solve(a, b, x0, config, backend, policy));

  timing.samples.reserve(repeats);
  for (std::size_t i = 0; i < repeats; ++i) {
    const auto start = std::chrono::steady_clock::now();
    GmresResult r = gmres_solve(a, b, x0, config, backend, policy);
    const auto stop = std::chrono::steady_clock::now();
    timing.samples.push_back(std::chrono::duration<double>(stop - start).count());
    check(r);
  }
  timing.median_seconds = median(timing.samples);
  return timing;
}

void BenchSpec::validate() const {
  if (sizes.empty()) throw std::invalid_argument("BenchSpec: sizes must be non-empty");
  for (std::size_t n : sizes)
    if (n < 2) throw std::invalid_argument("BenchSpec: every size must be >= 2");
  if (repeats < 1) throw std::invalid_argument("BenchSpec: repeats must be >= 1");
  if (level1_threshold < 1)
    throw std::invalid_argument("BenchSpec: level1_threshold must be >= 1");
  solver.validate();
}

bool SpeedupTable::all_valid() const noexcept {
  return std::all_of(rows.begin(), rows.end(),
                     [](const SpeedupRow& r) { return r.ok(); });
}

namespace {

std::string sanitize(std::string text) {
  std::replace(text.begin(), text.end(), ',', ';');
  std::replace(text.begin(), text.end(), '\n', ' ');
  std::replace(text.begin(), text.end(), '\r', ' ');
  return text;
}

DispatchPolicy policy_for(BackendId id, const BenchSpec& spec) {
  DispatchPolicy policy;
  policy.enabled_backend = id;
  policy.level1_threshold = spec.level1_threshold;
  return policy;
}

}  // namespace

SpeedupTable run_benchmark(const BenchSpec& spec, const BenchLog& log) {
  spec.validate();

  SpeedupTable table;
  table.backends = spec.backends;

  std::vector<std::size_t> sizes = spec.sizes;
  std::sort(sizes.begin(), sizes.end());

  for (std::size_t n : sizes) {
    SpeedupRow row;
    row.n = n;
    if (log) log("n=" + std::to_string(n) + ": generating problem");
    const Problem problem = generate_problem(n, spec.seed);
    row.matrix_hash = hash_matrix(problem.a);

    try {
      SerialHostBackend serial;
      if (log) log("n=" + std::to_string(n) + ": timing serial baseline");
      const TimingResult base =
          time_solve(problem.a, problem.b, spec.solver, serial,
                     policy_for(BackendId::SerialHost, spec), spec.repeats,
                     spec.warmup);
      row.t_serial = base.median_seconds;
      row.iterations = base.inner_iterations;
      row.restarts = base.restarts;
      row.final_residual = base.final_residual;

      for (BackendId id : spec.backends) {
        auto backend = make_backend(id, spec.workers);
        if (log)
          log("n=" + std::to_string(n) + ": timing " + std::string(to_string(id)));
        const TimingResult t =
            time_solve(problem.a, problem.b, spec.solver, *backend,
                       policy_for(id, spec), spec.repeats, spec.warmup);
        if (hash_matrix(problem.a) != row.matrix_hash)
          throw std::logic_error("problem matrix changed between backends");
        row.backends.push_back({id, t.median_seconds, row.t_serial / t.median_seconds});
      }
    } catch (const std::exception& e) {
      row.error = sanitize(e.what());
      if (log) log("n=" + std::to_string(n) + ": error: " + row.error);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace krylov
