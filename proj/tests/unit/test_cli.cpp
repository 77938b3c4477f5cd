#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli/cli.hpp"
#include "json.hpp"
#include "krylov/bench.hpp"
#include "krylov/matrix_market.hpp"
#include "krylov/table_io.hpp"

namespace krylov::cli {
namespace {

const std::filesystem::path kData = KRYLOV_TEST_DATA_DIR;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "krylov");
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("krylov_cli_test_" + name);
}

// Exit status of the real executable.
int run_binary(const std::string& args, const std::filesystem::path& stdout_file) {
  const std::string cmd = std::string("\"") + KRYLOV_CLI_PATH + "\" " + args + " > \"" +
                          stdout_file.string() + "\" 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(ParseSizes, ListsAndRanges) {
  EXPECT_EQ(parse_sizes("100"), (std::vector<std::size_t>{100}));
  EXPECT_EQ(parse_sizes("3,1,2"), (std::vector<std::size_t>{3, 1, 2}));
  EXPECT_EQ(parse_sizes("1000:4000:1000"), (std::vector<std::size_t>{1000, 2000, 3000, 4000}));
  EXPECT_EQ(parse_sizes("1000:10000:1000").size(), 10u);
  EXPECT_EQ(parse_sizes("5:9:3"), (std::vector<std::size_t>{5, 8}));
  for (const char* bad : {"", "a", "1,", "1:2", "1:2:0", "5:1:1", "1:2:3:4", "-1"})
    EXPECT_THROW(parse_sizes(bad), std::invalid_argument) << bad;
}

TEST(CliSolve, IdentityMatchesGolden) {
  const Outcome o = invoke({"solve", "--matrix", (kData / "identity_4.mtx").string()});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  auto report = nlohmann::json::parse(o.out);
  EXPECT_TRUE(report.contains("elapsed_seconds"));
  EXPECT_FALSE(report.contains("solution_path"));
  report.erase("elapsed_seconds");
  EXPECT_EQ(report, nlohmann::json::parse(slurp(kData / "golden/solve_identity_4.json")));
}

TEST(CliSolve, WritesSolution) {
  const auto out_path = temp_path("x.mtx");
  const Outcome o = invoke({"solve", "--matrix", (kData / "identity_4.mtx").string(), "--out",
                            out_path.string(), "--backend", "offload-model"});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  const auto report = nlohmann::json::parse(o.out);
  EXPECT_EQ(report["solution_path"], out_path.string());
  EXPECT_EQ(report["backend"], "offload-model");
  EXPECT_EQ(slurp(out_path), slurp(kData / "golden/solve_x_identity_4.mtx"));
  std::filesystem::remove(out_path);
}

TEST(CliSolve, ExplicitRhs) {
  const auto out_path = temp_path("x_rhs.mtx");
  const Outcome o = invoke({"solve", "--matrix", (kData / "identity_4.mtx").string(), "--rhs",
                            (kData / "rhs_4.mtx").string(), "--out", out_path.string()});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  const Vector x = read_matrix_market_vector(out_path);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(x[i], i + 1.0, 1e-14);
  std::filesystem::remove(out_path);
}

TEST(CliSolve, UnreachableToleranceExitsTwo) {
  const Problem p = generate_problem(60, 1);
  const auto path = temp_path("hard.mtx");
  write_matrix_market(path, p.a);
  const Outcome o = invoke({"solve", "--matrix", path.string(), "--tol", "1e-30",
                            "--max-restarts", "1", "--restart", "3"});
  EXPECT_EQ(o.code, kExitFailure);
  EXPECT_EQ(nlohmann::json::parse(o.out)["status"], "MaxRestartsExceeded");
  std::filesystem::remove(path);
}

TEST(CliSolve, UsageErrorsExitOne) {
  Outcome o = invoke({"solve"});
  EXPECT_EQ(o.code, kExitUsage);
  EXPECT_NE(o.err.find("--matrix"), std::string::npos);
  EXPECT_NE(o.err.find("Usage"), std::string::npos) << o.err;

  EXPECT_EQ(invoke({}).code, kExitUsage);
  EXPECT_EQ(invoke({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(invoke({"solve", "--matrix", (kData / "identity_4.mtx").string(), "--backend", "gpu"})
                .code,
            kExitUsage);
  EXPECT_EQ(invoke({"solve", "--matrix", (kData / "identity_4.mtx").string(), "--tol", "-1"}).code,
            kExitUsage);

  o = invoke({"solve", "--matrix", (kData / "bad_duplicate.mtx").string()});
  EXPECT_EQ(o.code, kExitUsage);
  EXPECT_NE(o.err.find("line 4"), std::string::npos) << o.err;

  o = invoke({"solve", "--matrix", (kData / "rect_2x3.mtx").string()});
  EXPECT_EQ(o.code, kExitUsage);

  o = invoke({"solve", "--matrix", (kData / "identity_4.mtx").string(), "--rhs",
              (kData / "array_2x2.mtx").string()});
  EXPECT_EQ(o.code, kExitUsage);
}

TEST(CliHelp, ListsEveryFlag) {
  const Outcome o = invoke({"--help"});
  EXPECT_EQ(o.code, kExitOk);
  for (const char* flag :
       {"solve", "bench", "selftest", "--matrix", "--rhs", "--out", "--backend", "--restart",
        "--tol", "--criterion", "--max-restarts", "--reorthogonalize", "--level1-threshold",
        "--sizes", "--repeats", "--warmup", "--seed", "--format", "--output"})
    EXPECT_NE(o.out.find(flag), std::string::npos) << flag;

  const Outcome sub = invoke({"bench", "--help"});
  EXPECT_EQ(sub.code, kExitOk);
  EXPECT_NE(sub.out.find("--sizes"), std::string::npos);
}

TEST(CliBench, SingleSerialRow) {
  const Outcome o = invoke({"bench", "--sizes", "100", "--backend", "serial", "--repeats", "3"});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  const SpeedupTable t = parse_csv(o.out);
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0].n, 100u);
  ASSERT_EQ(t.rows[0].backends.size(), 1u);
  EXPECT_EQ(t.rows[0].backends[0].backend, BackendId::SerialHost);
  EXPECT_GT(t.rows[0].backends[0].speedup, 0.0);
}

TEST(CliBench, SeededRunsShareMetadata) {
  const std::vector<std::string> args = {"bench", "--sizes", "100", "--repeats", "3", "--seed", "7"};
  const Outcome a = invoke(args);
  const Outcome b = invoke(args);
  ASSERT_EQ(a.code, kExitOk) << a.err;
  ASSERT_EQ(b.code, kExitOk) << b.err;
  const SpeedupTable ta = parse_csv(a.out);
  const SpeedupTable tb = parse_csv(b.out);
  ASSERT_EQ(ta.rows.size(), 1u);
  EXPECT_EQ(ta.backends, (std::vector<BackendId>{BackendId::ParallelHost, BackendId::OffloadModel}));
  EXPECT_EQ(ta.rows[0].n, tb.rows[0].n);
  EXPECT_EQ(ta.rows[0].iterations, tb.rows[0].iterations);
  EXPECT_EQ(ta.rows[0].restarts, tb.rows[0].restarts);
  EXPECT_EQ(ta.rows[0].final_residual, tb.rows[0].final_residual);
  EXPECT_EQ(ta.rows[0].matrix_hash, tb.rows[0].matrix_hash);
}

TEST(CliBench, JsonAndOutputFile) {
  const auto path = temp_path("bench.json");
  const Outcome o = invoke({"bench", "--sizes", "50,60", "--backend", "parallel", "--repeats", "1",
                            "--format", "json", "--output", path.string()});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_TRUE(o.out.empty());
  const auto doc = nlohmann::json::parse(slurp(path));
  ASSERT_EQ(doc.size(), 2u);
  EXPECT_EQ(doc[1]["n"], 60);
  EXPECT_EQ(doc[0]["speedup_parallel"].get<double>(),
            doc[0]["t_serial_s"].get<double>() / doc[0]["t_parallel_s"].get<double>());
  std::filesystem::remove(path);
}

TEST(CliBench, FailedRowsExitTwo) {
  const Outcome o = invoke({"bench", "--sizes", "30", "--backend", "serial", "--repeats", "1",
                            "--tol", "1e-30", "--max-restarts", "1"});
  EXPECT_EQ(o.code, kExitFailure);
  const SpeedupTable t = parse_csv(o.out);
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_FALSE(t.rows[0].ok());
}

TEST(CliBench, CommaListOfBackends) {
  const Outcome o = invoke({"bench", "--sizes", "40", "--backend", "serial,offload-model",
                            "--repeats", "1", "--warmup", "0"});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_NE(o.out.find("speedup_serial,t_offload-model_s,speedup_offload-model"),
            std::string::npos);
}

TEST(CliSelftest, Passes) {
  const Outcome o = invoke({"selftest"});
  EXPECT_EQ(o.code, kExitOk) << o.out;
  EXPECT_NE(o.out.find("selftest passed"), std::string::npos);
}

TEST(CliBinary, ExitCodeContract) {
  const auto out = temp_path("binary_stdout.txt");
  EXPECT_EQ(run_binary("solve --matrix \"" + (kData / "identity_4.mtx").string() + "\"", out),
            kExitOk);
  auto report = nlohmann::json::parse(slurp(out));
  report.erase("elapsed_seconds");
  EXPECT_EQ(report, nlohmann::json::parse(slurp(kData / "golden/solve_identity_4.json")));

  EXPECT_EQ(run_binary("solve", out), kExitUsage);
  EXPECT_EQ(run_binary("--help", out), kExitOk);
  EXPECT_NE(slurp(out).find("--level1-threshold"), std::string::npos);

  const Problem p = generate_problem(40, 2);
  const auto hard = temp_path("binary_hard.mtx");
  write_matrix_market(hard, p.a);
  EXPECT_EQ(run_binary("solve --matrix \"" + hard.string() +
                           "\" --tol 1e-30 --max-restarts 1 --restart 2",
                       out),
            kExitFailure);
  std::filesystem::remove(hard);
  std::filesystem::remove(out);
}

}  // namespace
}  // namespace krylov::cli
