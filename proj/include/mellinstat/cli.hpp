#pragma once

// Command-line front end. `run` takes the arguments after the program name
// and returns the process exit code:
//   0 success, 1 verification failure, 2 usage or I/O error, 3 estimation failure.

#include <iosfwd>
#include <string>
#include <vector>

namespace mellinstat::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitEstimation = 3;

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Values of the `x` column of a CSV file (or its only column). Throws
/// std::runtime_error on I/O or parse problems.
std::vector<double> read_values_csv(const std::string& path);

}  // namespace mellinstat::cli
