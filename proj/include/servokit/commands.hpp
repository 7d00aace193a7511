#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

#include "servokit/servo.hpp"

namespace servokit::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 1,
  kExitNumericalAbort = 2,
};

/// Applies SERVOKIT_LOG (trace, debug, info, warn, error, critical, off) to
/// the default logger. Unset or unknown values leave it at "warn".
void init_logging();

struct ServoArgs {
  std::filesystem::path config;
  std::filesystem::path out;
  std::optional<std::uint64_t> seed;  // overrides sensor.seed
};

/// Runs the closed loop and writes the trajectory CSV. On a numerical abort
/// the records up to the abort are still written.
int cmd_servo(const ServoArgs& args);

struct ScanArgs {
  std::filesystem::path config;
  std::filesystem::path out;
};

/// Writes the viewpoint CSV to `out` and the summary next to it.
int cmd_scan(const ScanArgs& args);

/// `scan.csv` -> `scan.summary.txt`.
std::filesystem::path summary_path_for(const std::filesystem::path& csv);

struct CheckJacobianArgs {
  JacobianVariant variant = JacobianVariant::kCorrected;
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
};

/// Prints the worst relative deviation; exit 0 iff it is within 1e-6.
int cmd_check_jacobian(const CheckJacobianArgs& args, std::ostream& out);

}  // namespace servokit::cli
