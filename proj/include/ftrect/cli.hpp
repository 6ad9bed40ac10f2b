#pragma once

#include <iosfwd>

namespace ftrect {

inline constexpr int kExitOk = 0;
inline constexpr int kExitPropertyFailure = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitAbort = 3;

/// Entry point shared by the executable and the tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ftrect
