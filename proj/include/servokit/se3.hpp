#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <numbers>

namespace servokit {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

constexpr double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Wraps an angle into (-pi, pi].
double wrap_angle(double rad);

/// Direction vector, normalized on construction.
class UnitVec3 {
 public:
  /// Throws std::invalid_argument for a zero or non-finite vector.
  explicit UnitVec3(const Vec3& v);
  UnitVec3(double x, double y, double z) : UnitVec3(Vec3(x, y, z)) {}

  static UnitVec3 unit_x() { return UnitVec3(1.0, 0.0, 0.0); }
  static UnitVec3 unit_y() { return UnitVec3(0.0, 1.0, 0.0); }
  static UnitVec3 unit_z() { return UnitVec3(0.0, 0.0, 1.0); }

  const Vec3& vec() const { return v_; }
  double x() const { return v_.x(); }
  double y() const { return v_.y(); }
  double z() const { return v_.z(); }

 private:
  Vec3 v_;
};

/// Intrinsic Z-Y-X Euler angles, R = Rz(a) * Ry(b) * Rx(c).
struct EulerZYX {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  // Set by rotation_to_euler when |cos b| < 1e-8; a is then forced to zero
  // and the residual rotation folded into c.
  bool gimbal_locked = false;
};

/// Proper rotation (orthonormal, det +1). Built only through the factories
/// below or from a matrix that passes is_rotation().
class Rotation {
 public:
  Rotation() : m_(Mat3::Identity()) {}

  static Rotation identity() { return Rotation(); }
  static Rotation about_x(double rad);
  static Rotation about_y(double rad);
  static Rotation about_z(double rad);
  static Rotation about_axis(const UnitVec3& axis, double rad);
  static Rotation from_euler(double a, double b, double c);
  /// Throws std::invalid_argument if m is not a rotation within `tol`.
  static Rotation from_matrix(const Mat3& m, double tol = 1e-9);

  const Mat3& matrix() const { return m_; }
  EulerZYX euler() const;
  Rotation inverse() const { return Rotation(m_.transpose(), Unchecked{}); }

  Rotation operator*(const Rotation& o) const { return Rotation(m_ * o.m_, Unchecked{}); }
  Vec3 operator*(const Vec3& v) const { return m_ * v; }

  /// Rotation angle in [0, pi].
  double angle() const;

  static bool is_rotation(const Mat3& m, double tol = 1e-9);

 private:
  struct Unchecked {};
  Rotation(const Mat3& m, Unchecked) : m_(m) {}

  Mat3 m_;
};

/// Pose of one frame expressed in another: v_parent = R * v_child + t.
class RigidPose {
 public:
  RigidPose() : t_(Vec3::Zero()) {}
  RigidPose(const Vec3& t, const Rotation& r) : t_(t), r_(r) {}

  static RigidPose identity() { return RigidPose(); }
  static RigidPose from_translation(const Vec3& t) { return RigidPose(t, Rotation()); }
  /// Translation in meters, Euler angles in radians.
  static RigidPose from_xyzabc(double x, double y, double z, double a, double b, double c);

  const Vec3& translation() const { return t_; }
  const Rotation& rotation() const { return r_; }
  EulerZYX euler() const { return r_.euler(); }
  Eigen::Matrix4d matrix() const;

  RigidPose inverse() const;
  RigidPose operator*(const RigidPose& o) const { return RigidPose(t_ + r_ * o.t_, r_ * o.r_); }
  Vec3 operator*(const Vec3& v) const { return r_ * v + t_; }

 private:
  Vec3 t_;
  Rotation r_;
};

Rotation euler_to_rotation(double a, double b, double c);
EulerZYX rotation_to_euler(const Rotation& r);

/// p followed by q, i.e. the pose of q's child frame in p's parent frame.
inline RigidPose compose(const RigidPose& p, const RigidPose& q) { return p * q; }
inline RigidPose invert(const RigidPose& p) { return p.inverse(); }
inline Vec3 transform_point(const RigidPose& p, const Vec3& v) { return p * v; }

}  // namespace servokit
