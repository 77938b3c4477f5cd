#include <gtest/gtest.h>

#include <charconv>
#include <cmath>
#include <limits>

#include "json.hpp"
#include "krylov/rng.hpp"
#include "krylov/table_io.hpp"

namespace krylov {
namespace {

SpeedupTable sample_table() {
  SpeedupTable t;
  t.backends = {BackendId::ParallelHost, BackendId::OffloadModel};
  SpeedupRow ok;
  ok.n = 1000;
  ok.t_serial = 0.125;
  ok.backends = {{BackendId::ParallelHost, 0.0625, 2.0},
                 {BackendId::OffloadModel, 0.1, 0.125 / 0.1}};
  ok.iterations = 12;
  ok.restarts = 1;
  ok.final_residual = 3.5e-9;
  ok.matrix_hash = 0x00ab'cdef'0123'4567ULL;
  SpeedupRow bad;
  bad.n = 2000;
  bad.t_serial = 1.0 / 3.0;
  bad.backends = {{BackendId::ParallelHost, 0.2, (1.0 / 3.0) / 0.2}};
  bad.iterations = 40;
  bad.restarts = 2;
  bad.final_residual = 0.5;
  bad.matrix_hash = ~0ULL;
  bad.error = "offload-model solve did not converge (status MaxRestartsExceeded)";
  t.rows = {ok, bad};
  return t;
}

TEST(FormatDouble, RoundTripsExactly) {
  for (double v : {0.0, 1.0, -2.5, 1.0 / 3.0, 6.02214076e23, 4.9e-324,
                   std::numeric_limits<double>::max()}) {
    const std::string s = format_double(v);
    double back = -1.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), back);
    EXPECT_TRUE(ec == std::errc() && ptr == s.data() + s.size()) << s;
    EXPECT_EQ(back, v) << s;
    EXPECT_EQ(s.find(','), std::string::npos);
  }
}

TEST(Csv, HeaderLayout) {
  const std::string csv = to_csv(sample_table());
  const std::string header = csv.substr(0, csv.find('\n'));
  EXPECT_EQ(header,
            "n,t_serial_s,t_parallel_s,speedup_parallel,t_offload-model_s,speedup_offload-model,"
            "iterations,restarts,final_residual,matrix_hash,error");
}

TEST(Csv, GoldenRow) {
  const std::string csv = to_csv(sample_table());
  const std::size_t first = csv.find('\n') + 1;
  EXPECT_EQ(csv.substr(first, csv.find('\n', first) - first),
            "1000,0.125,0.0625,2,0.10000000000000001,1.25,12,1,3.4999999999999999e-09,"
            "00abcdef01234567,");
}

TEST(Csv, RoundTrip) {
  const SpeedupTable t = sample_table();
  EXPECT_EQ(parse_csv(to_csv(t)), t);
}

TEST(Csv, RoundTripProperty) {
  Xoshiro256StarStar rng(2718);
  for (int trial = 0; trial < 50; ++trial) {
    SpeedupTable t;
    t.backends = {BackendId::SerialHost, BackendId::OffloadModel};
    const std::size_t rows = 1 + rng.next() % 6;
    for (std::size_t r = 0; r < rows; ++r) {
      SpeedupRow row;
      row.n = rng.next() % 100000;
      row.t_serial = rng.uniform() * std::pow(10.0, static_cast<int>(rng.next() % 12) - 6);
      const std::size_t present = rng.next() % 3;
      for (std::size_t b = 0; b < present; ++b) {
        const double secs = rng.uniform() + 1e-9;
        row.backends.push_back({t.backends[b], secs, row.t_serial / secs});
      }
      row.iterations = rng.next() % 5000;
      row.restarts = rng.next() % 100;
      row.final_residual = rng.uniform() * 1e-8;
      row.matrix_hash = rng.next();
      if (present < 2) row.error = "failed; row " + std::to_string(r);
      t.rows.push_back(std::move(row));
    }
    ASSERT_EQ(parse_csv(to_csv(t)), t) << to_csv(t);
  }
}

TEST(Csv, ParseErrorsCarryLineNumbers) {
  EXPECT_THROW(parse_csv(""), std::runtime_error);
  EXPECT_THROW(parse_csv("x,y\n"), std::runtime_error);
  const std::string csv = to_csv(sample_table());
  const std::string truncated = csv + "3000,0.1\n";
  try {
    parse_csv(truncated);
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos) << e.what();
  }
  std::string bad_number = csv;
  bad_number.replace(bad_number.find("1000,"), 4, "1e3x");
  EXPECT_THROW(parse_csv(bad_number), std::runtime_error);
  EXPECT_THROW(parse_csv("n,t_serial_s,t_gpu_s,speedup_gpu,iterations,restarts,final_residual,"
                         "matrix_hash,error\n"),
               std::runtime_error);
}

TEST(Json, Structure) {
  const auto doc = nlohmann::json::parse(to_json(sample_table()));
  ASSERT_TRUE(doc.is_array());
  ASSERT_EQ(doc.size(), 2u);
  EXPECT_EQ(doc[0]["n"], 1000);
  EXPECT_EQ(doc[0]["speedup_parallel"].get<double>(), 2.0);
  EXPECT_EQ(doc[0]["t_offload-model_s"].get<double>(), 0.1);
  EXPECT_EQ(doc[0]["matrix_hash"], "00abcdef01234567");
  EXPECT_TRUE(doc[0]["error"].is_null());
  EXPECT_FALSE(doc[1].contains("speedup_offload-model"));
  EXPECT_EQ(doc[1]["error"], sample_table().rows[1].error);
}

}  // namespace
}  // namespace krylov
