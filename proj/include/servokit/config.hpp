#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "servokit/features.hpp"
#include "servokit/plant.hpp"
#include "servokit/scanner.hpp"
#include "servokit/servo.hpp"

namespace servokit {

/// Everything needed for one closed-loop run.
///
/// Text form is line oriented: `[section]` headers, `key = value` lines and
/// `#` comments. Lengths are meters, times seconds, angles degrees (stored
/// here in radians). Sections and keys:
///
///   [goal]     x y z (m), a b c (deg), axis_offset (m)   desired hole pose in the flange frame
///   [initial]  x y z (m), a b c (deg)                    hole pose in the flange frame at t = 0
///   [limits]   v_max (m/s), w_max (deg/s), period (s), gain_translation, gain_rotation,
///              deadband, cond_max
///   [sensor]   sigma_t (m), sigma_r (deg), latency_steps, dropout_prob, seed
///   [hand_eye] x y z (m), a b c (deg)                    camera pose in the flange frame
///   [run]      duration (s), servo_start (s), jacobian_variant, output
///
/// Angle `a` and everything in [sensor], [hand_eye], deadband, cond_max,
/// axis_offset, jacobian_variant and output are optional.
struct RunConfig {
  GoalSpec goal;
  Limits limits;
  SensorModel sensor;
  RigidPose initial_hole_in_flange;
  double duration = 25.0;
  double servo_start = 4.0;
  JacobianVariant variant = JacobianVariant::kCorrected;
  std::string output;

  /// Throws ValidationError naming the violated invariant.
  void validate() const;

  /// World anchored at the hole; the flange starts where the initial relative
  /// pose puts it.
  WorldState initial_state() const;
  LoopOptions loop_options() const;
};

inline constexpr double kMaxDuration = 1e4;

/// Throws ParseError (with line number) or ValidationError.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);
std::string format_config(const RunConfig& cfg);

/// Field-wise comparison; poses and reals within `tol`.
bool approx_equal(const RunConfig& a, const RunConfig& b, double tol = 1e-12);

/// Viewpoint scan setup.
///
///   [grid]   d_min d_max d_step l_min l_max l_step (m),
///            theta_min theta_max theta_step phi_min phi_max phi_step (deg)
///   [oracle] range_min range_max (m), fov_half_h fov_half_v incidence_max (deg)   optional
///   [hole]   x y z (m), a b c (deg)                                               optional
///   [run]    output                                                               optional
struct ScanConfig {
  ScanGrid grid;
  DetectOracle oracle;
  RigidPose hole_in_world;
  std::string output;

  void validate() const;
};

ScanConfig parse_scan_config(std::string_view text);
ScanConfig load_scan_config(const std::filesystem::path& path);
std::string format_scan_config(const ScanConfig& cfg);

}  // namespace servokit
