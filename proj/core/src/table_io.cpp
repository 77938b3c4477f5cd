#include "krylov/table_io.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "json.hpp"

namespace krylov {

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
  throw std::runtime_error("csv line " + std::to_string(line) + ": " + msg);
}

double parse_double(std::string_view s, std::size_t line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    fail(line, "bad number '" + std::string(s) + "'");
  return v;
}

std::uint64_t parse_uint(std::string_view s, std::size_t line, int base = 10) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, base);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    fail(line, "bad integer '" + std::string(s) + "'");
  return v;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value,
                                 std::chars_format::general, 17);
  if (ec != std::errc()) throw std::runtime_error("format_double: buffer too small");
  return std::string(buf, ptr);
}

std::string to_csv(const SpeedupTable& table) {
  std::string out = "n,t_serial_s";
  for (BackendId id : table.backends) {
    const std::string name(to_string(id));
    out += ",t_" + name + "_s,speedup_" + name;
  }
  out += ",iterations,restarts,final_residual,matrix_hash,error\n";

  for (const SpeedupRow& row : table.rows) {
    out += std::to_string(row.n) + "," + format_double(row.t_serial);
    for (std::size_t i = 0; i < table.backends.size(); ++i) {
      if (i < row.backends.size()) {
        out += "," + format_double(row.backends[i].seconds) + "," +
               format_double(row.backends[i].speedup);
      } else {
        out += ",,";
      }
    }
    out += "," + std::to_string(row.iterations) + "," +
           std::to_string(row.restarts) + "," +
           format_double(row.final_residual) + "," + hex64(row.matrix_hash) +
           "," + row.error + "\n";
  }
  return out;
}

SpeedupTable parse_csv(std::string_view text) {
  std::vector<std::string_view> lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) fail(1, "missing header");

  SpeedupTable table;
  const auto header = split(lines[0], ',');
  constexpr std::size_t kTrailing = 5;
  if (header.size() < 2 + kTrailing || header[0] != "n" || header[1] != "t_serial_s")
    fail(1, "unexpected header");
  const std::size_t backend_cols = header.size() - 2 - kTrailing;
  if (backend_cols % 2 != 0) fail(1, "unpaired backend columns");
  for (std::size_t c = 2; c < 2 + backend_cols; c += 2) {
    std::string_view col = header[c];
    if (col.size() < 5 || col.substr(0, 2) != "t_" || col.substr(col.size() - 2) != "_s")
      fail(1, "bad backend column '" + std::string(col) + "'");
    const std::string_view name = col.substr(2, col.size() - 4);
    if (header[c + 1] != "speedup_" + std::string(name))
      fail(1, "speedup column does not match '" + std::string(name) + "'");
    auto id = parse_backend_id(name);
    if (!id) fail(1, "unknown backend '" + std::string(name) + "'");
    table.backends.push_back(*id);
  }

  for (std::size_t li = 1; li < lines.size(); ++li) {
    const std::size_t line_no = li + 1;
    const auto fields = split(lines[li], ',');
    if (fields.size() != header.size()) fail(line_no, "wrong field count");
    SpeedupRow row;
    row.n = parse_uint(fields[0], line_no);
    row.t_serial = parse_double(fields[1], line_no);
    for (std::size_t i = 0; i < table.backends.size(); ++i) {
      const auto t = fields[2 + 2 * i];
      const auto s = fields[3 + 2 * i];
      if (t.empty() && s.empty()) continue;
      row.backends.push_back(
          {table.backends[i], parse_double(t, line_no), parse_double(s, line_no)});
    }
    const std::size_t base = 2 + backend_cols;
    row.iterations = parse_uint(fields[base], line_no);
    row.restarts = parse_uint(fields[base + 1], line_no);
    row.final_residual = parse_double(fields[base + 2], line_no);
    row.matrix_hash = parse_uint(fields[base + 3], line_no, 16);
    row.error = std::string(fields[base + 4]);
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string to_json(const SpeedupTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const SpeedupRow& row : table.rows) {
    nlohmann::json obj;
    obj["n"] = row.n;
    obj["t_serial_s"] = row.t_serial;
    for (const BackendTiming& t : row.backends) {
      const std::string name(to_string(t.backend));
      obj["t_" + name + "_s"] = t.seconds;
      obj["speedup_" + name] = t.speedup;
    }
    obj["iterations"] = row.iterations;
    obj["restarts"] = row.restarts;
    obj["final_residual"] = row.final_residual;
    obj["matrix_hash"] = hex64(row.matrix_hash);
    obj["error"] = row.ok() ? nlohmann::json(nullptr) : nlohmann::json(row.error);
    rows.push_back(std::move(obj));
  }
  return rows.dump(2) + "\n";
}

}  // namespace krylov
