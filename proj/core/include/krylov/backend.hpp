#pragma once

// Execution backends and the size-threshold placement policy.
//
// Three backends implement the same level-1/level-2 kernel set:
//   SerialHost    sequential reference kernels (the baseline)
//   ParallelHost  row-parallel matvec, fixed-chunk deterministic reductions
//   OffloadModel  ParallelHost kernels plus host<->device transfer accounting
//
// Every backend is bitwise deterministic run to run. ParallelHost reductions
// split the operand into chunks of kReductionChunk elements, reduce each chunk
// sequentially and then combine the chunk partials sequentially, so the result
// does not depend on the worker count or scheduling.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "krylov/la.hpp"

namespace krylov {

enum class BackendId { SerialHost, ParallelHost, OffloadModel };

/// BLAS level of an operation: Level1 = vector-vector, Level2 = matrix-vector.
enum class OpKind { Level1, Level2 };

/// CLI spelling: "serial", "parallel", "offload-model".
std::string_view to_string(BackendId id) noexcept;
std::optional<BackendId> parse_backend_id(std::string_view name) noexcept;

struct DispatchPolicy {
  /// Level-1 ops go to the accelerated backend iff operand elements exceed this.
  std::size_t level1_threshold = 500'000;
  /// Level-2 ops go to the accelerated backend iff operand elements exceed this.
  std::size_t level2_threshold = 1;
  BackendId enabled_backend = BackendId::OffloadModel;

  /// Throws std::invalid_argument if a threshold is zero.
  void validate() const;
};

/// Where an operation on `operand_elements` elements should run. Pure.
BackendId choose_placement(const DispatchPolicy& policy, OpKind kind,
                           std::size_t operand_elements) noexcept;

struct BackendStats {
  std::uint64_t matvec_count = 0;
  std::uint64_t level1_op_count = 0;
  std::uint64_t bytes_to_device = 0;
  std::uint64_t bytes_from_device = 0;
  std::uint64_t level1_elapsed_ns = 0;
  std::uint64_t level2_elapsed_ns = 0;

  friend bool operator==(const BackendStats&, const BackendStats&) = default;
};

/// Kernel interface shared by all backends. Public entry points check shapes
/// and maintain BackendStats; subclasses supply the arithmetic. An instance is
/// used by one solve at a time.
class Backend {
 public:
  virtual ~Backend() = default;
  Backend(const Backend&) = delete;
  Backend& operator=(const Backend&) = delete;

  virtual BackendId id() const noexcept = 0;

  Vector matvec(const DenseMatrix& a, const Vector& x);
  double dot(const Vector& u, const Vector& v);
  double norm2(const Vector& v);
  /// y <- alpha * x + y
  void axpy(double alpha, const Vector& x, Vector& y);
  /// v <- alpha * v
  void scale(double alpha, Vector& v);

  /// Marks the start of a solve. Device-resident operands are invalidated;
  /// counters are left untouched.
  virtual void begin_solve() {}

  BackendStats stats_snapshot() const noexcept { return stats_; }
  void reset_stats() noexcept { stats_ = {}; }

 protected:
  Backend() = default;

  virtual void do_matvec(const DenseMatrix& a, const Vector& x, Vector& y) = 0;
  virtual double do_dot(const Vector& u, const Vector& v) = 0;
  virtual void do_axpy(double alpha, const Vector& x, Vector& y) = 0;
  virtual void do_scale(double alpha, Vector& v) = 0;

  // Transfer hooks; only the offload model moves bytes.
  virtual void on_matvec_transfer(const DenseMatrix&, const Vector&) {}
  virtual void on_level1_transfer(std::size_t /*elements_in*/,
                                  std::size_t /*elements_out*/) {}

  BackendStats stats_;
};

class SerialHostBackend : public Backend {
 public:
  SerialHostBackend() = default;
  BackendId id() const noexcept override { return BackendId::SerialHost; }

 protected:
  void do_matvec(const DenseMatrix& a, const Vector& x, Vector& y) override;
  double do_dot(const Vector& u, const Vector& v) override;
  void do_axpy(double alpha, const Vector& x, Vector& y) override;
  void do_scale(double alpha, Vector& v) override;
};

class ThreadPool;

class ParallelHostBackend : public Backend {
 public:
  /// Elements per reduction chunk. Fixed, so reductions are reproducible.
  static constexpr std::size_t kReductionChunk = 4096;
  /// Rows per matvec task.
  static constexpr std::size_t kRowBlock = 64;

  /// `workers` = 0 picks std::thread::hardware_concurrency().
  explicit ParallelHostBackend(std::size_t workers = 0);
  ~ParallelHostBackend() override;

  BackendId id() const noexcept override { return BackendId::ParallelHost; }
  std::size_t worker_count() const noexcept;

 protected:
  void do_matvec(const DenseMatrix& a, const Vector& x, Vector& y) override;
  double do_dot(const Vector& u, const Vector& v) override;
  void do_axpy(double alpha, const Vector& x, Vector& y) override;
  void do_scale(double alpha, Vector& v) override;

 private:
  std::unique_ptr<ThreadPool> pool_;
};

/// ParallelHost arithmetic with modeled device residency: the matrix operand
/// is uploaded on first touch per solve and cached; vectors move every call.
class OffloadModelBackend : public ParallelHostBackend {
 public:
  using ParallelHostBackend::ParallelHostBackend;

  BackendId id() const noexcept override { return BackendId::OffloadModel; }
  void begin_solve() override;

  /// True iff `a` is the currently device-resident matrix.
  bool is_resident(const DenseMatrix& a) const noexcept;

 protected:
  void on_matvec_transfer(const DenseMatrix& a, const Vector& x) override;
  void on_level1_transfer(std::size_t elements_in,
                          std::size_t elements_out) override;

 private:
  const double* resident_data_ = nullptr;
  std::size_t resident_rows_ = 0;
  std::size_t resident_cols_ = 0;
};

std::unique_ptr<Backend> make_backend(BackendId id, std::size_t workers = 0);

/// Routes each kernel call either to the accelerated backend or to a local
/// SerialHost instance, as decided by choose_placement.
class Dispatcher {
 public:
  /// Throws std::invalid_argument if policy.enabled_backend != accelerated.id().
  Dispatcher(Backend& accelerated, DispatchPolicy policy);
  /// Default policy with enabled_backend = accelerated.id().
  explicit Dispatcher(Backend& accelerated);

  Vector matvec(const DenseMatrix& a, const Vector& x);
  double dot(const Vector& u, const Vector& v);
  double norm2(const Vector& v);
  void axpy(double alpha, const Vector& x, Vector& y);
  void scale(double alpha, Vector& v);

  void begin_solve();

  const DispatchPolicy& policy() const noexcept { return policy_; }
  Backend& accelerated() noexcept { return *accelerated_; }
  BackendStats host_stats() const noexcept { return host_.stats_snapshot(); }

 private:
  Backend& route(OpKind kind, std::size_t elements);

  Backend* accelerated_;
  DispatchPolicy policy_;
  SerialHostBackend host_;
};

}  // namespace krylov
