#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ethdyn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumeric = 2;
inline constexpr int kExitUsage = 64;

/// Entry point behind the ethdyn executable. `args` excludes the program
/// name. Output files are written only once the whole command succeeded.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace ethdyn::cli
