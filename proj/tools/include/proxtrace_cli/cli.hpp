#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace proxtrace::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNoData = 2;

/// Entry point shared by the binary and the in-process tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace proxtrace::cli
