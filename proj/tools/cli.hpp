#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cayspec::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitComputational = 3;

/// Runs one subcommand. The report goes to `out` (or --out), errors go to
/// `err` as {"error", "detail"} JSON.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cayspec::cli
