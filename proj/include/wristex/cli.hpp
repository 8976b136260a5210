#pragma once

#include <iosfwd>

namespace wristex::cli {

enum ExitCode : int {
  kOk = 0,
  kUsageError = 1,
  kDataError = 2,
  kConfigError = 3,
};

// Entry point behind the `wristex` executable; `out` receives summaries,
// `err` receives diagnostics.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wristex::cli
