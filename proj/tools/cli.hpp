#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mwt::cli {

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // runtime or statistical failure
inline constexpr int kExitUsage = 2;

/// Runs the mwt command line. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mwt::cli
