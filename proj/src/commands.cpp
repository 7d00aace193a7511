#include "servokit/commands.hpp"

#include <spdlog/spdlog.h>

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <string>

#include "servokit/config.hpp"
#include "servokit/errors.hpp"
#include "servokit/jacobian_check.hpp"
#include "servokit/plant.hpp"
#include "servokit/scanner.hpp"

namespace servokit::cli {

namespace {

constexpr double kJacobianTolerance = 1e-6;

bool write_file(const std::filesystem::path& path, auto&& writer) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) {
    spdlog::error("cannot open '{}' for writing", path.string());
    return false;
  }
  writer(os);
  os.flush();
  if (!os) {
    spdlog::error("failed while writing '{}'", path.string());
    return false;
  }
  return true;
}

}  // namespace

void init_logging() {
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("SERVOKIT_LOG")) {
    const auto level = spdlog::level::from_str(env);
    // from_str maps anything unknown to "off"; only honour an explicit "off".
    if (level != spdlog::level::off || std::string(env) == "off") spdlog::set_level(level);
  }
}

int cmd_servo(const ServoArgs& args) {
  RunConfig cfg;
  try {
    cfg = load_config(args.config);
  } catch (const ServokitError& e) {
    spdlog::error("{}: {}", args.config.string(), e.what());
    return kExitConfigError;
  }
  if (args.seed) cfg.sensor.seed = *args.seed;
  spdlog::info("servo: {} s at {} ms period, variant {}, seed {}", cfg.duration, cfg.limits.period * 1e3,
               to_string(cfg.variant), cfg.sensor.seed);

  TrajectoryLog log;
  int code = kExitOk;
  try {
    log = run_closed_loop(cfg.initial_state(), cfg.goal, cfg.limits, cfg.sensor, cfg.loop_options());
  } catch (const LoopAborted& e) {
    spdlog::error("{}", e.what());
    log = e.partial_log();
    code = kExitNumericalAbort;
  }
  if (!write_file(args.out, [&](std::ostream& os) { log.write_csv(os); })) return kExitConfigError;
  if (!log.records.empty()) {
    const FeatureError& last = log.records.back().error;
    spdlog::info("servo: {} periods written to {}, final max |e| = {} m", log.records.size(),
                 args.out.string(), last.max_abs());
  }
  return code;
}

std::filesystem::path summary_path_for(const std::filesystem::path& csv) {
  std::filesystem::path p = csv;
  p.replace_extension(".summary.txt");
  return p;
}

int cmd_scan(const ScanArgs& args) {
  ScanConfig cfg;
  try {
    cfg = load_scan_config(args.config);
  } catch (const ServokitError& e) {
    spdlog::error("{}: {}", args.config.string(), e.what());
    return kExitConfigError;
  }
  ScanReport report;
  try {
    report = run_scan(cfg.grid, cfg.oracle, cfg.hole_in_world);
  } catch (const GridTooLarge& e) {
    spdlog::error("{}", e.what());
    return kExitConfigError;
  }
  if (!write_file(args.out, [&](std::ostream& os) { report.write_csv(os); })) return kExitConfigError;
  const auto summary = summary_path_for(args.out);
  if (!write_file(summary, [&](std::ostream& os) { report.write_summary(os); })) return kExitConfigError;
  spdlog::info("scan: {} of {} viewpoints found the hole", report.summary.found, report.summary.total);
  return kExitOk;
}

int cmd_check_jacobian(const CheckJacobianArgs& args, std::ostream& out) {
  if (args.trials == 0) {
    spdlog::warn("check-jacobian: zero trials requested, nothing to compare");
    out << "variant " << to_string(args.variant) << ": 0 trials, max relative deviation 0 (vacuous)\n";
    return kExitOk;
  }
  JacobianCheckOptions opts;
  opts.variant = args.variant;
  opts.trials = args.trials;
  opts.seed = args.seed;
  opts.tolerance = kJacobianTolerance;
  const JacobianCheckReport report = check_jacobian(opts);

  out << "variant " << to_string(args.variant) << ": " << report.trials
      << " trials, max relative deviation " << report.max_deviation << " (trial " << report.worst_trial
      << ", tolerance " << kJacobianTolerance << ")\n";
  if (!report.near_singular.empty()) {
    out << report.near_singular.size() << " near-singular configuration(s) (cond1 > " << opts.cond_max
        << "):\n";
    for (const NearSingularSample& s : report.near_singular) {
      out << "  trial " << s.trial << ": p1 = (" << s.p1.x() << ", " << s.p1.y() << ", " << s.p1.z()
          << "), p2 = (" << s.p2.x() << ", " << s.p2.y() << ", " << s.p2.z() << "), cond1 = " << s.condition
          << '\n';
    }
  }
  const bool ok = report.passed(kJacobianTolerance);
  out << (ok ? "PASS" : "FAIL") << '\n';
  return ok ? kExitOk : kExitNumericalAbort;
}

}  // namespace servokit::cli
