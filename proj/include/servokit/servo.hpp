#pragma once

#include <Eigen/Core>

#include <string_view>

#include "servokit/features.hpp"
#include "servokit/se3.hpp"

namespace servokit {

/// Rows ordered as FeatureError (e11, e12, e21, e22, e13), columns as the
/// controlled parameters (x, y, z, b, c).
using Jacobian5 = Eigen::Matrix<double, 5, 5>;

/// Which infinitesimal rotation the c column is built from.
///
/// kCorrected uses rotation about the goal x-axis, so every controlled
/// parameter acts on the hole axis. kAsPrinted keeps the z-axis generator,
/// which cannot observe tilt about x and is singular once the hole axis is
/// aligned with z.
enum class JacobianVariant { kCorrected, kAsPrinted };

std::string_view to_string(JacobianVariant v);
/// Accepts "corrected" or "as_printed"; throws ValidationError otherwise.
JacobianVariant parse_jacobian_variant(std::string_view name);

/// Controlled parameter index, matching Jacobian5 columns.
enum class Generator { kX = 0, kY = 1, kZ = 2, kB = 3, kC = 4 };

/// Rotation axis of the b or c generator for the given variant.
Vec3 generator_axis(Generator g, JacobianVariant variant);

/// dp/dq for a point p under one generator motion: a unit translation, or
/// axis x p for the rotational generators.
Vec3 generator_velocity(Generator g, const Vec3& p, JacobianVariant variant);

Jacobian5 build_jacobian(const Vec3& p1, const Vec3& p2,
                         JacobianVariant variant = JacobianVariant::kCorrected);

/// 1-norm condition number; +inf for singular or non-finite matrices.
double condition_number(const Jacobian5& j);

/// Solves J dx = e. Throws IllConditioned when condition_number(J) > cond_max.
Vector5 newton_step(const FeatureError& e, const Jacobian5& j, double cond_max = 1e8);

struct Limits {
  double v_max = 0.05;                      // m/s
  double w_max = deg2rad(40.0);             // rad/s
  double period = 0.004;                    // s
  double gain_translation = 0.001;          // unitless, per period
  double gain_rotation = 0.001;             // unitless, per period
  double deadband = 1e-9;                   // m for translation, rad for rotation
  double cond_max = 1e8;

  double max_translation_step() const { return v_max * period; }
  double max_rotation_step() const { return w_max * period; }

  /// Throws ValidationError naming the first violated invariant.
  void validate() const;
};

/// Increment sent to the robot for one period, expressed in the goal frame.
struct Correction {
  Vec3 translation = Vec3::Zero();  // dx, dy, dz [m]
  double db = 0.0;                  // rad
  double dc = 0.0;                  // rad
  bool saturated_t = false;
  bool saturated_r = false;

  Vector5 vector() const {
    return (Vector5() << translation.x(), translation.y(), translation.z(), db, dc).finished();
  }
  bool is_zero() const { return translation.isZero(0.0) && db == 0.0 && dc == 0.0; }
};

/// Scales the raw Newton step so that each block keeps its direction, has
/// gain * |raw| magnitude, and never exceeds the per-period velocity cap.
Correction limit_corrections(const Vector5& raw, const Limits& limits);

struct ServoDiagnostics {
  HolePoints points;
  Vector5 raw_step = Vector5::Zero();
  double condition = 0.0;
};

struct ServoOutput {
  Correction correction;
  FeatureError error;
  ServoDiagnostics diagnostics;
};

/// One full controller update: observation -> features -> Jacobian ->
/// Newton step -> velocity limiting.
/// Throws InvalidObservation or IllConditioned.
ServoOutput servo_step(const HoleObservation& obs, const GoalSpec& goal, const RigidPose& hand_eye,
                       const Limits& limits,
                       JacobianVariant variant = JacobianVariant::kCorrected);

}  // namespace servokit
