#include "servokit/features.hpp"

#include <cmath>

#include "servokit/errors.hpp"

namespace servokit {

void GoalSpec::validate() const {
  if (!(std::isfinite(axis_offset) && axis_offset > 0.0)) {
    throw ValidationError("goal.axis_offset must be > 0");
  }
}

RigidPose hole_in_goal_frame(const RigidPose& hole_in_camera, const RigidPose& hand_eye,
                             const GoalSpec& goal) {
  const RigidPose hole_in_flange = hand_eye * hole_in_camera;
  return goal.desired_hole_in_flange.inverse() * hole_in_flange;
}

HolePoints hole_points_in_goal_frame(const HoleObservation& obs, const RigidPose& hand_eye,
                                     const GoalSpec& goal) {
  if (!obs.valid) {
    throw InvalidObservation("hole observation is marked invalid");
  }
  goal.validate();
  const RigidPose hole = hole_in_goal_frame(obs.hole_in_camera, hand_eye, goal);
  HolePoints pts;
  pts.p1 = hole.translation();
  pts.p2 = pts.p1 + goal.axis_offset * hole.rotation().matrix().col(2);
  return pts;
}

FeatureError feature_error(const Vec3& p1, const Vec3& p2) {
  FeatureError e;
  e.e11 = plane_normal(1).dot(p1);
  e.e12 = plane_normal(2).dot(p1);
  e.e21 = plane_normal(1).dot(p2);
  e.e22 = plane_normal(2).dot(p2);
  e.e13 = plane_normal(3).dot(p1);
  return e;
}

}  // namespace servokit
