#pragma once

// Command-line front end: test, screen, simulate, influence.
// Exit codes: 0 success, 2 usage or input error, 1 internal error.

#include <iosfwd>
#include <string>
#include <vector>

namespace catdcov {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitInput = 2;

/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace catdcov
