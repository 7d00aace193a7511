#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "servokit/commands.hpp"
#include "servokit/errors.hpp"

int main(int argc, char** argv) {
  using namespace servokit;
  cli::init_logging();

  CLI::App app{"Feature-based visual servoing toolkit"};
  app.require_subcommand(1);

  cli::ServoArgs servo_args;
  std::optional<std::uint64_t> servo_seed;
  auto* servo = app.add_subcommand("servo", "Run the closed-loop alignment and write the trajectory CSV");
  servo->add_option("--config", servo_args.config, "Run configuration")->required()->check(CLI::ExistingFile);
  servo->add_option("--out", servo_args.out, "Trajectory CSV path")->required();
  servo->add_option("--seed", servo_seed, "Override the sensor noise seed");

  cli::ScanArgs scan_args;
  auto* scan = app.add_subcommand("scan", "Evaluate the viewpoint lattice and write the scan CSV");
  scan->add_option("--config", scan_args.config, "Scan configuration")->required()->check(CLI::ExistingFile);
  scan->add_option("--out", scan_args.out, "Scan CSV path (summary goes next to it)")->required();

  cli::CheckJacobianArgs jac_args;
  std::string variant = "corrected";
  auto* check = app.add_subcommand("check-jacobian", "Compare the feature Jacobian with finite differences");
  check->add_option("--variant", variant, "corrected or as_printed")
      ->check(CLI::IsMember({"corrected", "as_printed"}));
  check->add_option("--trials", jac_args.trials, "Number of random configurations");
  check->add_option("--seed", jac_args.seed, "Sampling seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitConfigError;
  }

  if (*servo) {
    servo_args.seed = servo_seed;
    return cli::cmd_servo(servo_args);
  }
  if (*scan) return cli::cmd_scan(scan_args);
  if (*check) {
    jac_args.variant = parse_jacobian_variant(variant);
    return cli::cmd_check_jacobian(jac_args, std::cout);
  }
  return cli::kExitConfigError;
}
