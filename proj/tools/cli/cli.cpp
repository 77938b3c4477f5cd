#include "cli/cli.hpp"

#include <charconv>
#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"
#include "krylov/backend.hpp"
#include "krylov/bench.hpp"
#include "krylov/gmres.hpp"
#include "krylov/matrix_market.hpp"
#include "krylov/table_io.hpp"

namespace krylov::cli {

namespace {

struct SolverFlags {
  std::size_t restart = GmresConfig{}.restart_m;
  double tol = GmresConfig{}.tol;
  std::string criterion = "rel";
  std::size_t max_restarts = GmresConfig{}.max_restarts;
  bool reorthogonalize = false;
  std::size_t level1_threshold = DispatchPolicy{}.level1_threshold;

  GmresConfig config() const {
    GmresConfig c;
    c.restart_m = restart;
    c.tol = tol;
    c.criterion = criterion == "abs" ? ConvergenceCriterion::Absolute
                                     : ConvergenceCriterion::RelativeToB;
    c.max_restarts = max_restarts;
    c.reorthogonalize = reorthogonalize;
    return c;
  }
};

struct SolveArgs {
  std::string matrix;
  std::string rhs;
  std::string out;
  std::string backend = "serial";
  SolverFlags solver;
};

struct BenchArgs {
  std::string sizes = "1000:10000:1000";
  std::vector<std::string> backends = {"parallel", "offload-model"};
  std::size_t repeats = BenchSpec{}.repeats;
  std::size_t warmup = BenchSpec{}.warmup;
  std::uint64_t seed = BenchSpec{}.seed;
  std::string format = "csv";
  std::string output;
  SolverFlags solver;
};

const std::map<std::string, BackendId> kBackendNames = {
    {"serial", BackendId::SerialHost},
    {"parallel", BackendId::ParallelHost},
    {"offload-model", BackendId::OffloadModel},
};

void add_solver_flags(CLI::App& cmd, SolverFlags& f) {
  cmd.add_option("--restart", f.restart, "Restart length m (inner iterations per cycle)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd.add_option("--tol", f.tol, "Convergence tolerance epsilon")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd.add_option("--criterion", f.criterion,
                 "Stopping test: rel (||r|| <= tol*||b||) or abs (||r|| <= tol)")
      ->check(CLI::IsMember({"rel", "abs"}))
      ->capture_default_str();
  cmd.add_option("--max-restarts", f.max_restarts, "Maximum number of restart cycles")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd.add_flag("--reorthogonalize", f.reorthogonalize,
               "Second Gram-Schmidt pass per Arnoldi step (default: off)");
  cmd.add_option("--level1-threshold", f.level1_threshold,
                 "Vector length above which level-1 ops run on the accelerated backend")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

int cmd_solve(const SolveArgs& args, std::ostream& out, std::ostream& err) {
  DenseMatrix a = read_matrix_market(args.matrix);
  if (!a.is_square()) {
    err << "error: matrix must be square, got " << a.rows() << "x" << a.cols() << "\n";
    return kExitUsage;
  }
  Vector b = args.rhs.empty() ? matvec(a, Vector(a.cols(), 1.0))
                              : read_matrix_market_vector(args.rhs);
  if (b.size() != a.rows()) {
    err << "error: rhs length " << b.size() << " does not match matrix order "
        << a.rows() << "\n";
    return kExitUsage;
  }

  const BackendId id = kBackendNames.at(args.backend);
  auto backend = make_backend(id);
  DispatchPolicy policy;
  policy.enabled_backend = id;
  policy.level1_threshold = args.solver.level1_threshold;

  const auto start = std::chrono::steady_clock::now();
  GmresResult result =
      gmres_solve(a, b, Vector(a.cols()), args.solver.config(), *backend, policy);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  nlohmann::json report;
  report["n"] = a.rows();
  report["status"] = std::string(to_string(result.status));
  report["iterations"] = result.inner_iterations;
  report["restarts"] = result.restarts_used;
  report["matvecs"] = result.total_matvecs;
  report["final_residual"] = result.final_residual;
  report["elapsed_seconds"] = elapsed;
  report["backend"] = args.backend;
  if (!args.out.empty()) {
    write_matrix_market(std::filesystem::path(args.out), result.x);
    report["solution_path"] = args.out;
  }
  out << report.dump(2) << "\n";
  return result.status == SolveStatus::Converged ? kExitOk : kExitFailure;
}

int cmd_bench(const BenchArgs& args, std::ostream& out, std::ostream& err) {
  BenchSpec spec;
  spec.sizes = parse_sizes(args.sizes);
  spec.backends.clear();
  for (const auto& name : args.backends) spec.backends.push_back(kBackendNames.at(name));
  spec.repeats = args.repeats;
  spec.warmup = args.warmup;
  spec.seed = args.seed;
  spec.solver = args.solver.config();
  spec.level1_threshold = args.solver.level1_threshold;

  const SpeedupTable table =
      run_benchmark(spec, [&err](const std::string& msg) { err << msg << "\n"; });
  const std::string text = args.format == "json" ? to_json(table) : to_csv(table);

  if (args.output.empty()) {
    out << text;
  } else {
    std::ofstream file(args.output, std::ios::binary);
    if (!file) {
      err << "error: cannot write '" << args.output << "'\n";
      return kExitUsage;
    }
    file << text;
  }
  for (const auto& row : table.rows)
    if (!row.ok()) err << "row n=" << row.n << " failed: " << row.error << "\n";
  return table.all_valid() ? kExitOk : kExitFailure;
}

}  // namespace

std::vector<std::size_t> parse_sizes(std::string_view text) {
  auto number = [](std::string_view s) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
      throw std::invalid_argument("bad size '" + std::string(s) + "'");
    return v;
  };

  std::vector<std::size_t> sizes;
  if (text.find(':') != std::string_view::npos) {
    const auto p1 = text.find(':');
    const auto p2 = text.find(':', p1 + 1);
    if (p2 == std::string_view::npos || text.find(':', p2 + 1) != std::string_view::npos)
      throw std::invalid_argument("size range must be start:stop:step");
    const std::size_t start = number(text.substr(0, p1));
    const std::size_t stop = number(text.substr(p1 + 1, p2 - p1 - 1));
    const std::size_t step = number(text.substr(p2 + 1));
    if (step == 0) throw std::invalid_argument("size range step must be >= 1");
    if (stop < start) throw std::invalid_argument("size range stop < start");
    for (std::size_t n = start; n <= stop; n += step) sizes.push_back(n);
  } else {
    std::size_t begin = 0;
    for (;;) {
      const auto comma = text.find(',', begin);
      sizes.push_back(number(text.substr(begin, comma - begin)));
      if (comma == std::string_view::npos) break;
      begin = comma + 1;
    }
  }
  return sizes;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Restarted GMRES(m) solver with modeled CPU/accelerator dispatch", "krylov"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Solve A x = b read from Matrix Market files");
  solve_cmd->add_option("--matrix", solve.matrix, "Matrix Market file holding A")->required();
  solve_cmd->add_option("--rhs", solve.rhs,
                        "Matrix Market n x 1 file holding b (default: b = A * ones)");
  solve_cmd->add_option("--out", solve.out, "Write the solution x here (Matrix Market)");
  solve_cmd->add_option("--backend", solve.backend, "serial | parallel | offload-model")
      ->check(CLI::IsMember({"serial", "parallel", "offload-model"}))
      ->capture_default_str();
  add_solver_flags(*solve_cmd, solve.solver);

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand(
      "bench", "Time the serial baseline against accelerated backends and report speedups");
  bench_cmd->add_option("--sizes", bench.sizes, "Comma list or start:stop:step")
      ->capture_default_str();
  bench_cmd->add_option("--backend", bench.backends,
                        "Backends compared against serial (comma list or repeated): "
                        "serial | parallel | offload-model")
      ->delimiter(',')
      ->check(CLI::IsMember({"serial", "parallel", "offload-model"}))
      ->default_str("parallel,offload-model");
  bench_cmd->add_option("--repeats", bench.repeats, "Timed solves per backend (median)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench_cmd->add_option("--warmup", bench.warmup, "Untimed solves before timing")
      ->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed, "Problem generator seed")->capture_default_str();
  bench_cmd->add_option("--format", bench.format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  bench_cmd->add_option("--output", bench.output, "Write the table here (default: stdout)");
  add_solver_flags(*bench_cmd, bench.solver);

  auto* selftest_cmd =
      app.add_subcommand("selftest", "Run the solver invariant suite and report pass/fail");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const CLI::App* target = &app;
    for (const CLI::App* sub : app.get_subcommands()) target = sub;
    // Top-level help lists every subcommand's flags.
    out << (target == &app ? app.help("", CLI::AppFormatMode::All) : target->help());
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    const CLI::App* target = &app;
    for (const CLI::App* sub : app.get_subcommands()) target = sub;
    err << "error: " << e.what() << "\n\n" << target->help();
    return kExitUsage;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(solve, out, err);
    if (bench_cmd->parsed()) return cmd_bench(bench, out, err);
    if (selftest_cmd->parsed()) return run_selftest(out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  err << app.help();
  return kExitUsage;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace krylov::cli
