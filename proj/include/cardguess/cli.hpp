#pragma once

#include <iosfwd>

namespace cardguess {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitBudget = 2;  // BudgetExceeded or CapExceeded

// Subcommands: exact, optimal, simulate, sweep, posterior, cutoff-bound,
// audit, tables. Results go to `out` unless --out names a file.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cardguess
