#include "krylov/backend.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <thread>
#include <vector>

#include "thread_pool.hpp"

namespace krylov {

namespace {

constexpr std::uint64_t kBytesPerElement = sizeof(double);

class ScopedTimer {
 public:
  explicit ScopedTimer(std::uint64_t& sink)
      : sink_(sink), start_(std::chrono::steady_clock::now()) {}
  ~ScopedTimer() {
    auto elapsed = std::chrono::steady_clock::now() - start_;
    sink_ += static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(elapsed).count());
  }

 private:
  std::uint64_t& sink_;
  std::chrono::steady_clock::time_point start_;
};

std::size_t chunk_count(std::size_t n, std::size_t chunk) {
  return (n + chunk - 1) / chunk;
}

}  // namespace

std::string_view to_string(BackendId id) noexcept {
  switch (id) {
    case BackendId::SerialHost: return "serial";
    case BackendId::ParallelHost: return "parallel";
    case BackendId::OffloadModel: return "offload-model";
  }
  return "unknown";
}

std::optional<BackendId> parse_backend_id(std::string_view name) noexcept {
  if (name == "serial") return BackendId::SerialHost;
  if (name == "parallel") return BackendId::ParallelHost;
  if (name == "offload-model") return BackendId::OffloadModel;
  return std::nullopt;
}

void DispatchPolicy::validate() const {
  if (level1_threshold < 1 || level2_threshold < 1)
    throw std::invalid_argument("DispatchPolicy: thresholds must be >= 1");
}

BackendId choose_placement(const DispatchPolicy& policy, OpKind kind,
                           std::size_t operand_elements) noexcept {
  const std::size_t threshold = kind == OpKind::Level1 ? policy.level1_threshold
                                                       : policy.level2_threshold;
  return operand_elements > threshold ? policy.enabled_backend
                                      : BackendId::SerialHost;
}

// --------------------------------------------------------------- Backend

Vector Backend::matvec(const DenseMatrix& a, const Vector& x) {
  if (a.cols() != x.size())
    throw DimensionMismatch("matvec", a.rows(), a.cols(), x.size(), 1);
  Vector y(a.rows());
  {
    ScopedTimer timer(stats_.level2_elapsed_ns);
    on_matvec_transfer(a, x);
    do_matvec(a, x, y);
  }
  ++stats_.matvec_count;
  return y;
}

double Backend::dot(const Vector& u, const Vector& v) {
  if (u.size() != v.size()) throw DimensionMismatch("dot", u.size(), v.size());
  double result = 0.0;
  {
    ScopedTimer timer(stats_.level1_elapsed_ns);
    on_level1_transfer(2 * u.size(), 1);
    result = do_dot(u, v);
  }
  ++stats_.level1_op_count;
  return result;
}

double Backend::norm2(const Vector& v) {
  double result = 0.0;
  {
    ScopedTimer timer(stats_.level1_elapsed_ns);
    on_level1_transfer(v.size(), 1);
    result = std::sqrt(do_dot(v, v));
  }
  ++stats_.level1_op_count;
  return result;
}

void Backend::axpy(double alpha, const Vector& x, Vector& y) {
  if (x.size() != y.size()) throw DimensionMismatch("axpy", x.size(), y.size());
  {
    ScopedTimer timer(stats_.level1_elapsed_ns);
    on_level1_transfer(2 * x.size(), y.size());
    do_axpy(alpha, x, y);
  }
  ++stats_.level1_op_count;
}

void Backend::scale(double alpha, Vector& v) {
  {
    ScopedTimer timer(stats_.level1_elapsed_ns);
    on_level1_transfer(v.size(), v.size());
    do_scale(alpha, v);
  }
  ++stats_.level1_op_count;
}

// ------------------------------------------------------------ SerialHost

void SerialHostBackend::do_matvec(const DenseMatrix& a, const Vector& x,
                                  Vector& y) {
  kernels::matvec_rows(a, x.values(), y.values(), 0, a.rows());
}

double SerialHostBackend::do_dot(const Vector& u, const Vector& v) {
  return kernels::dot(u.values(), v.values());
}

void SerialHostBackend::do_axpy(double alpha, const Vector& x, Vector& y) {
  kernels::axpy(alpha, x.values(), y.values());
}

void SerialHostBackend::do_scale(double alpha, Vector& v) {
  kernels::scale(alpha, v.values());
}

// ---------------------------------------------------------- ParallelHost

ParallelHostBackend::ParallelHostBackend(std::size_t workers) {
  if (workers == 0)
    workers = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  pool_ = std::make_unique<ThreadPool>(workers);
}

ParallelHostBackend::~ParallelHostBackend() = default;

std::size_t ParallelHostBackend::worker_count() const noexcept {
  return pool_->size();
}

void ParallelHostBackend::do_matvec(const DenseMatrix& a, const Vector& x,
                                    Vector& y) {
  // Each row is an independent sequential dot product, so the result is
  // bitwise identical to the serial kernel.
  const std::size_t rows = a.rows();
  pool_->run(chunk_count(rows, kRowBlock), [&](std::size_t block) {
    const std::size_t begin = block * kRowBlock;
    const std::size_t end = std::min(rows, begin + kRowBlock);
    kernels::matvec_rows(a, x.values(), y.values(), begin, end);
  });
}

double ParallelHostBackend::do_dot(const Vector& u, const Vector& v) {
  const std::size_t n = u.size();
  const std::size_t chunks = chunk_count(n, kReductionChunk);
  if (chunks == 1) return kernels::dot(u.values(), v.values());

  std::vector<double> partials(chunks, 0.0);
  pool_->run(chunks, [&](std::size_t c) {
    const std::size_t begin = c * kReductionChunk;
    const std::size_t len = std::min(n - begin, kReductionChunk);
    partials[c] = kernels::dot(u.values().subspan(begin, len),
                               v.values().subspan(begin, len));
  });
  double sum = 0.0;
  for (double p : partials) sum += p;
  return sum;
}

void ParallelHostBackend::do_axpy(double alpha, const Vector& x, Vector& y) {
  const std::size_t n = x.size();
  pool_->run(chunk_count(n, kReductionChunk), [&](std::size_t c) {
    const std::size_t begin = c * kReductionChunk;
    const std::size_t len = std::min(n - begin, kReductionChunk);
    kernels::axpy(alpha, x.values().subspan(begin, len),
                  y.values().subspan(begin, len));
  });
}

void ParallelHostBackend::do_scale(double alpha, Vector& v) {
  const std::size_t n = v.size();
  pool_->run(chunk_count(n, kReductionChunk), [&](std::size_t c) {
    const std::size_t begin = c * kReductionChunk;
    const std::size_t len = std::min(n - begin, kReductionChunk);
    kernels::scale(alpha, v.values().subspan(begin, len));
  });
}

// ---------------------------------------------------------- OffloadModel

void OffloadModelBackend::begin_solve() {
  resident_data_ = nullptr;
  resident_rows_ = 0;
  resident_cols_ = 0;
}

bool OffloadModelBackend::is_resident(const DenseMatrix& a) const noexcept {
  return resident_data_ == a.data() && resident_rows_ == a.rows() &&
         resident_cols_ == a.cols();
}

void OffloadModelBackend::on_matvec_transfer(const DenseMatrix& a,
                                             const Vector& x) {
  if (!is_resident(a)) {
    stats_.bytes_to_device += kBytesPerElement * a.element_count();
    resident_data_ = a.data();
    resident_rows_ = a.rows();
    resident_cols_ = a.cols();
  }
  stats_.bytes_to_device += kBytesPerElement * x.size();
  stats_.bytes_from_device += kBytesPerElement * a.rows();
}

void OffloadModelBackend::on_level1_transfer(std::size_t elements_in,
                                             std::size_t elements_out) {
  stats_.bytes_to_device += kBytesPerElement * elements_in;
  stats_.bytes_from_device += kBytesPerElement * elements_out;
}

std::unique_ptr<Backend> make_backend(BackendId id, std::size_t workers) {
  switch (id) {
    case BackendId::SerialHost: return std::make_unique<SerialHostBackend>();
    case BackendId::ParallelHost:
      return std::make_unique<ParallelHostBackend>(workers);
    case BackendId::OffloadModel:
      return std::make_unique<OffloadModelBackend>(workers);
  }
  throw std::invalid_argument("make_backend: unknown backend id");
}

// ------------------------------------------------------------ Dispatcher

Dispatcher::Dispatcher(Backend& accelerated, DispatchPolicy policy)
    : accelerated_(&accelerated), policy_(policy) {
  policy_.validate();
  if (policy_.enabled_backend != accelerated.id())
    throw std::invalid_argument(
        "Dispatcher: policy enables '" +
        std::string(to_string(policy_.enabled_backend)) +
        "' but the supplied backend is '" +
        std::string(to_string(accelerated.id())) + "'");
}

Dispatcher::Dispatcher(Backend& accelerated)
    : Dispatcher(accelerated, [&] {
        DispatchPolicy p;
        p.enabled_backend = accelerated.id();
        return p;
      }()) {}

Backend& Dispatcher::route(OpKind kind, std::size_t elements) {
  if (choose_placement(policy_, kind, elements) == BackendId::SerialHost &&
      accelerated_->id() != BackendId::SerialHost)
    return host_;
  return *accelerated_;
}

Vector Dispatcher::matvec(const DenseMatrix& a, const Vector& x) {
  return route(OpKind::Level2, a.element_count()).matvec(a, x);
}

double Dispatcher::dot(const Vector& u, const Vector& v) {
  return route(OpKind::Level1, u.size()).dot(u, v);
}

double Dispatcher::norm2(const Vector& v) {
  return route(OpKind::Level1, v.size()).norm2(v);
}

void Dispatcher::axpy(double alpha, const Vector& x, Vector& y) {
  route(OpKind::Level1, x.size()).axpy(alpha, x, y);
}

void Dispatcher::scale(double alpha, Vector& v) {
  route(OpKind::Level1, v.size()).scale(alpha, v);
}

void Dispatcher::begin_solve() {
  accelerated_->begin_solve();
  host_.begin_solve();
}

}  // namespace krylov
