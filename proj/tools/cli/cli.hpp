#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace matterwave::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNumerical = 2;

/// Entry point of the `matterwave` tool. `args` excludes the program name.
/// Tables go to --output (or `out`), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace matterwave::cli
