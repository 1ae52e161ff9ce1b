#pragma once

#include <iosfwd>

namespace fastpoisson::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
    kOk = 0,
    kSuiteFailure = 1,
    kConfigError = 2,
    kIoError = 3,
    kAllocationError = 4,
    kInstability = 5,
};

/// Entry point of the command-line tool; argv[0] is the program name.
/// Machine-readable results go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fastpoisson::cli
