#include "krylov/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "krylov/table_io.hpp"

namespace krylov {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string> tokens(const std::string& line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

bool blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  /// Next non-blank, non-comment line; false at EOF.
  bool next(std::vector<std::string>& out) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (blank(line) || line[0] == '%') continue;
      out = tokens(line);
      return true;
    }
    return false;
  }

  bool header(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++line_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }

  std::size_t line() const noexcept { return line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
};

std::size_t parse_index(const std::string& s, std::size_t line) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw MatrixMarketError(line, "expected a non-negative integer, got '" + s + "'");
  return v;
}

double parse_value(const std::string& s, std::size_t line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw MatrixMarketError(line, "expected a real number, got '" + s + "'");
  if (!std::isfinite(v)) throw MatrixMarketError(line, "non-finite value '" + s + "'");
  return v;
}

}  // namespace

MatrixMarketError::MatrixMarketError(std::size_t line, const std::string& message)
    : std::runtime_error("matrix market line " + std::to_string(line) + ": " + message),
      line_(line) {}

DenseMatrix parse_matrix_market(std::istream& in) {
  Reader reader(in);
  std::string header;
  if (!reader.header(header)) throw MatrixMarketError(1, "empty input");

  const auto h = tokens(header);
  if (h.size() != 5 || h[0] != "%%MatrixMarket")
    throw MatrixMarketError(1, "malformed header '" + header + "'");
  if (lower(h[1]) != "matrix")
    throw MatrixMarketError(1, "unsupported object '" + h[1] + "'");
  const std::string format = lower(h[2]);
  if (format != "coordinate" && format != "array")
    throw MatrixMarketError(1, "unsupported format '" + h[2] + "'");
  if (lower(h[3]) != "real")
    throw MatrixMarketError(1, "unsupported field '" + h[3] + "' (only real)");
  if (lower(h[4]) != "general")
    throw MatrixMarketError(1, "unsupported symmetry '" + h[4] + "' (only general)");

  std::vector<std::string> t;
  if (!reader.next(t)) throw MatrixMarketError(reader.line(), "missing size line");
  const bool coordinate = format == "coordinate";
  if (t.size() != (coordinate ? 3u : 2u))
    throw MatrixMarketError(reader.line(), "malformed size line");
  const std::size_t rows = parse_index(t[0], reader.line());
  const std::size_t cols = parse_index(t[1], reader.line());
  if (rows == 0 || cols == 0)
    throw MatrixMarketError(reader.line(), "dimensions must be >= 1");

  std::vector<double> data(rows * cols, 0.0);
  if (coordinate) {
    const std::size_t nnz = parse_index(t[2], reader.line());
    if (nnz > rows * cols)
      throw MatrixMarketError(reader.line(), "more entries than matrix elements");
    std::vector<bool> seen(rows * cols, false);
    for (std::size_t e = 0; e < nnz; ++e) {
      if (!reader.next(t))
        throw MatrixMarketError(reader.line(), "expected " + std::to_string(nnz) +
                                                   " entries, found " + std::to_string(e));
      if (t.size() != 3) throw MatrixMarketError(reader.line(), "malformed entry");
      const std::size_t i = parse_index(t[0], reader.line());
      const std::size_t j = parse_index(t[1], reader.line());
      if (i < 1 || i > rows || j < 1 || j > cols)
        throw MatrixMarketError(reader.line(), "index (" + t[0] + "," + t[1] +
                                                   ") out of bounds");
      const std::size_t k = (i - 1) * cols + (j - 1);
      if (seen[k])
        throw MatrixMarketError(reader.line(),
                                "duplicate entry (" + t[0] + "," + t[1] + ")");
      seen[k] = true;
      data[k] = parse_value(t[2], reader.line());
    }
  } else {
    std::size_t filled = 0;
    const std::size_t total = rows * cols;
    while (filled < total) {
      if (!reader.next(t))
        throw MatrixMarketError(reader.line(), "expected " + std::to_string(total) +
                                                   " values, found " +
                                                   std::to_string(filled));
      for (const auto& tok : t) {
        if (filled == total) throw MatrixMarketError(reader.line(), "too many values");
        const std::size_t i = filled % rows;
        const std::size_t j = filled / rows;
        data[i * cols + j] = parse_value(tok, reader.line());
        ++filled;
      }
    }
  }
  if (reader.next(t)) throw MatrixMarketError(reader.line(), "trailing data");
  return DenseMatrix(rows, cols, std::move(data));
}

Vector parse_matrix_market_vector(std::istream& in) {
  DenseMatrix m = parse_matrix_market(in);
  if (m.cols() != 1 && m.rows() != 1)
    throw MatrixMarketError(0, "expected an n x 1 vector, got " +
                                   std::to_string(m.rows()) + "x" +
                                   std::to_string(m.cols()));
  return Vector(std::vector<double>(m.values().begin(), m.values().end()));
}

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MatrixMarketError(0, "cannot open '" + path.string() + "'");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

}  // namespace

DenseMatrix read_matrix_market(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_matrix_market(in);
}

Vector read_matrix_market_vector(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_matrix_market_vector(in);
}

void write_matrix_market(std::ostream& out, const DenseMatrix& a) {
  out << "%%MatrixMarket matrix array real general\n";
  out << a.rows() << ' ' << a.cols() << '\n';
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) out << format_double(a(i, j)) << '\n';
}

void write_matrix_market(std::ostream& out, const Vector& v) {
  out << "%%MatrixMarket matrix array real general\n";
  out << v.size() << " 1\n";
  for (double e : v.values()) out << format_double(e) << '\n';
}

void write_matrix_market(const std::filesystem::path& path, const DenseMatrix& a) {
  auto out = open_output(path);
  write_matrix_market(out, a);
}

void write_matrix_market(const std::filesystem::path& path, const Vector& v) {
  auto out = open_output(path);
  write_matrix_market(out, v);
}

}  // namespace krylov
