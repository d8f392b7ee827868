#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace oet::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitCheckFailed = 2;

/// Runs the `oet` command line. `args` excludes the program name.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace oet::cli
