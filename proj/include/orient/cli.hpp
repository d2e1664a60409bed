#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace orient::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

// Entry point shared by the executable and the tests. CSV goes to `out` unless
// --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace orient::cli
