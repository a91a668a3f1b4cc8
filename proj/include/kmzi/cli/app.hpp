#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kmzi::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitMalformed = 4;

/// Entry point of the kmzi tool.  args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kmzi::cli
