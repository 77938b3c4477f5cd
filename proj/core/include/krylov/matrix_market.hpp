#pragma once

// ASCII Matrix Market ingestion for real general matrices.
//
// Accepted header: %%MatrixMarket matrix <coordinate|array> real general
// Coordinate entries are 1-based and materialized dense (missing entries are
// zero, duplicates are rejected). Array entries are column-major. Writers emit
// the array format with 17 significant digits, which round-trips bitwise.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "krylov/la.hpp"

namespace krylov {

class MatrixMarketError : public std::runtime_error {
 public:
  MatrixMarketError(std::size_t line, const std::string& message);
  /// 1-based line number of the offending input (0 if the file is unreadable).
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

DenseMatrix parse_matrix_market(std::istream& in);
/// Accepts an n x 1 (or 1 x n) matrix.
Vector parse_matrix_market_vector(std::istream& in);

DenseMatrix read_matrix_market(const std::filesystem::path& path);
Vector read_matrix_market_vector(const std::filesystem::path& path);

void write_matrix_market(std::ostream& out, const DenseMatrix& a);
/// Written as an n x 1 array.
void write_matrix_market(std::ostream& out, const Vector& v);
void write_matrix_market(const std::filesystem::path& path, const DenseMatrix& a);
void write_matrix_market(const std::filesystem::path& path, const Vector& v);

}  // namespace krylov
