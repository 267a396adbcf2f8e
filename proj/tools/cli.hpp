#pragma once

#include <iosfwd>

namespace latdef::cli {

// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kFalse = 1;
inline constexpr int kInputError = 2;
inline constexpr int kIndeterminate = 3;

// Runs one command line; all output goes to `out` and diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace latdef::cli
