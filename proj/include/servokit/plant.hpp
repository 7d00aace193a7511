#pragma once

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "servokit/errors.hpp"
#include "servokit/features.hpp"
#include "servokit/se3.hpp"
#include "servokit/servo.hpp"

namespace servokit {

/// Kinematic world. The hole is fixed; only the flange moves.
struct WorldState {
  RigidPose flange_in_world;
  RigidPose hole_in_world;
  double t = 0.0;

  /// Pose of the hole expressed in the flange frame.
  RigidPose hole_in_flange() const { return flange_in_world.inverse() * hole_in_world; }
};

/// Eye-in-hand depth camera stand-in.
struct SensorModel {
  RigidPose hand_eye;          // camera pose in the flange frame
  double sigma_t = 0.0;        // m, per axis
  double sigma_r = 0.0;        // rad, rotation angle about a uniformly random axis
  int latency_steps = 0;       // control periods
  double dropout_prob = 0.0;   // [0, 1)
  std::uint64_t seed = 0;

  void validate() const;
};

/// Stateful synthetic observer: owns the RNG stream and the latency queue, so
/// one instance belongs to exactly one run.
class SyntheticCamera {
 public:
  explicit SyntheticCamera(SensorModel model);

  /// Call once per control period, in order.
  HoleObservation observe(const WorldState& state);

  const SensorModel& model() const { return model_; }

 private:
  struct Sample {
    RigidPose hole_in_camera;
    double t;
  };

  SensorModel model_;
  std::mt19937_64 rng_;
  std::deque<Sample> history_;
};

/// Moves the flange by `corr`, expressed in the goal frame D (the flange
/// frame displaced by goal.desired_hole_in_flange). The translation runs
/// along D's axes and the rotation Ry(db) * R_c(dc) turns about D's origin,
/// so hole coordinates in D update as p <- p - J dx to first order.
WorldState apply_correction(const WorldState& state, const Correction& corr, const GoalSpec& goal,
                            JacobianVariant variant = JacobianVariant::kCorrected);

struct TrajectoryRecord {
  double t = 0.0;
  RigidPose hole_in_flange;
  FeatureError error;
  Correction correction;
  bool obs_valid = true;
};

/// One record per control period.
struct TrajectoryLog {
  std::vector<TrajectoryRecord> records;

  static constexpr const char* kCsvHeader =
      "t,x,y,z,a,b,c,e11,e12,e21,e22,e13,dx,dy,dz,db,dc,sat_t,sat_r,obs_valid";

  /// Translations in meters, angles in degrees, flags as 0/1. Numbers use the
  /// shortest round-trip representation, independent of the global locale.
  void write_csv(std::ostream& os) const;
};

struct LoopOptions {
  double duration = 25.0;     // s
  double servo_start = 4.0;   // s; the robot holds still before this
  JacobianVariant variant = JacobianVariant::kCorrected;
  int max_consecutive_failures = 10;
};

/// Raised by run_closed_loop when the solver keeps failing; carries the
/// records logged before the abort.
class LoopAborted : public IllConditioned {
 public:
  LoopAborted(const std::string& what, double condition, TrajectoryLog partial)
      : IllConditioned(what, condition), partial_(std::move(partial)) {}
  const TrajectoryLog& partial_log() const noexcept { return partial_; }

 private:
  TrajectoryLog partial_;
};

/// Fixed-step closed loop: observe -> servo_step -> apply_correction.
/// Periods with dropped observations or a single ill-conditioned solve hold
/// still. Throws LoopAborted after more than max_consecutive_failures
/// ill-conditioned periods in a row.
TrajectoryLog run_closed_loop(const WorldState& initial, const GoalSpec& goal, const Limits& limits,
                              const SensorModel& sensor, const LoopOptions& options);

}  // namespace servokit
