#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qrdyn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitUnresolved = 3;

/// Runs one command line; args excludes the program name. Artifacts without an
/// --out file are written to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qrdyn::cli
