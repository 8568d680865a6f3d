#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace emopair::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs one `emopair` invocation. `args` excludes the program name. Normal
/// output goes to `out`; failures print a single line
/// `error: <Kind>: <message>` to `err`.
///
/// Exit status: 0 on success, 2 for invalid flags, 1 for pipeline errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Expands `--config FILE` (key = value lines, '#' comments) into flags for
/// the selected subcommand. Flags given on the command line win. Exposed for
/// tests; run() calls it.
std::vector<std::string> expand_config(const std::vector<std::string>& args);

}  // namespace emopair::cli
