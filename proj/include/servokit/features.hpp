#pragma once

#include <Eigen/Core>

#include "servokit/se3.hpp"

namespace servokit {

using Vector5 = Eigen::Matrix<double, 5, 1>;

/// Where the hole should sit relative to the flange once aligned.
///
/// The goal frame D is the flange frame displaced by `desired_hole_in_flange`;
/// it coincides with the hole frame exactly when the flange has reached its
/// target. `axis_offset` is the distance between the two feature points along
/// the hole axis (meters, strictly positive).
struct GoalSpec {
  RigidPose desired_hole_in_flange;
  double axis_offset = 0.1;

  /// Throws ValidationError if axis_offset is not a positive finite number.
  void validate() const;
};

/// Hole pose as reported by the vision block. The hole frame's z-axis is the
/// hole's principal axis.
struct HoleObservation {
  RigidPose hole_in_camera;
  double timestamp = 0.0;
  bool valid = true;
};

/// The two points on the hole axis, expressed in the goal frame.
struct HolePoints {
  Vec3 p1 = Vec3::Zero();
  Vec3 p2 = Vec3::Zero();
};

/// Point-to-plane distances against the goal frame's YZ, XZ and XY planes,
/// stored in the fixed order (e11, e12, e21, e22, e13).
struct FeatureError {
  double e11 = 0.0;
  double e12 = 0.0;
  double e21 = 0.0;
  double e22 = 0.0;
  double e13 = 0.0;

  Vector5 vector() const { return (Vector5() << e11, e12, e21, e22, e13).finished(); }
  static FeatureError from_vector(const Vector5& v) { return {v(0), v(1), v(2), v(3), v(4)}; }
  double max_abs() const { return vector().cwiseAbs().maxCoeff(); }
  bool operator==(const FeatureError&) const = default;
};

/// Plane normals of the goal frame, indexed as in e_{i,j} = n_j . p_i.
inline const Vec3& plane_normal(int j) {
  static const Vec3 normals[3] = {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
  return normals[j - 1];
}

/// Pose of the hole in the goal frame, given the camera's view of it.
RigidPose hole_in_goal_frame(const RigidPose& hole_in_camera, const RigidPose& hand_eye,
                             const GoalSpec& goal);

/// Throws InvalidObservation when obs.valid is false.
HolePoints hole_points_in_goal_frame(const HoleObservation& obs, const RigidPose& hand_eye,
                                     const GoalSpec& goal);

FeatureError feature_error(const Vec3& p1, const Vec3& p2);
inline FeatureError feature_error(const HolePoints& pts) { return feature_error(pts.p1, pts.p2); }

}  // namespace servokit
