#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lcmwarp::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitTransform = 3;

// Runs the command line `args` (args[0] is the program name). Diagnostics go
// to `err` as a single line prefixed "error:".
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lcmwarp::cli
