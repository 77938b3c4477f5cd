#pragma once

// Text encodings of a SpeedupTable.
//
// CSV: '\n' line endings, '.' decimal separator, 17 significant digits for
// floating-point fields, no locale dependence. Columns:
//   n,t_serial_s,{t_<backend>_s,speedup_<backend>}...,iterations,restarts,
//   final_residual,matrix_hash,error
// Backend columns of a failed row may be empty.

#include <string>
#include <string_view>

#include "krylov/bench.hpp"

namespace krylov {

/// 17 significant digits, shortest exponent form; locale independent.
std::string format_double(double value);

std::string to_csv(const SpeedupTable& table);
/// Inverse of to_csv. Throws std::runtime_error on malformed input.
SpeedupTable parse_csv(std::string_view text);

/// JSON array with one object per row, using the CSV column names as keys.
std::string to_json(const SpeedupTable& table);

}  // namespace krylov
