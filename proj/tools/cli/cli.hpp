#pragma once

// `krylov` command-line front end: solve, bench, selftest.
//
// Exit codes: 0 success / converged, 1 usage or input errors,
// 2 non-convergence (solve), failed rows (bench) or failed checks (selftest).

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace krylov::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFailure = 2;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "1000,2000" or "start:stop:step" (inclusive stop). Throws std::invalid_argument.
std::vector<std::size_t> parse_sizes(std::string_view text);

/// Invariant suite behind `krylov selftest`.
int run_selftest(std::ostream& out);

}  // namespace krylov::cli
