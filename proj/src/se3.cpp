#include "servokit/se3.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace servokit {

namespace {
constexpr double kGimbalCos = 1e-8;
}  // namespace

double wrap_angle(double rad) {
  double w = std::remainder(rad, 2.0 * std::numbers::pi);
  if (w <= -std::numbers::pi) w += 2.0 * std::numbers::pi;
  return w;
}

UnitVec3::UnitVec3(const Vec3& v) {
  const double n = v.norm();
  if (!std::isfinite(n) || n == 0.0) {
    throw std::invalid_argument("UnitVec3: zero or non-finite vector");
  }
  v_ = v / n;
}

Rotation Rotation::about_x(double rad) {
  const double c = std::cos(rad), s = std::sin(rad);
  Mat3 m;
  m << 1, 0, 0,
       0, c, -s,
       0, s, c;
  return Rotation(m, Unchecked{});
}

Rotation Rotation::about_y(double rad) {
  const double c = std::cos(rad), s = std::sin(rad);
  Mat3 m;
  m << c, 0, s,
       0, 1, 0,
       -s, 0, c;
  return Rotation(m, Unchecked{});
}

Rotation Rotation::about_z(double rad) {
  const double c = std::cos(rad), s = std::sin(rad);
  Mat3 m;
  m << c, -s, 0,
       s, c, 0,
       0, 0, 1;
  return Rotation(m, Unchecked{});
}

Rotation Rotation::about_axis(const UnitVec3& axis, double rad) {
  return Rotation(Eigen::AngleAxisd(rad, axis.vec()).toRotationMatrix(), Unchecked{});
}

Rotation Rotation::from_euler(double a, double b, double c) {
  return about_z(a) * about_y(b) * about_x(c);
}

Rotation Rotation::from_matrix(const Mat3& m, double tol) {
  if (!is_rotation(m, tol)) {
    throw std::invalid_argument("Rotation::from_matrix: matrix is not a proper rotation");
  }
  return Rotation(m, Unchecked{});
}

bool Rotation::is_rotation(const Mat3& m, double tol) {
  if (!m.allFinite()) return false;
  if ((m.transpose() * m - Mat3::Identity()).cwiseAbs().maxCoeff() > tol) return false;
  return std::abs(m.determinant() - 1.0) <= tol;
}

EulerZYX Rotation::euler() const {
  const Mat3& r = m_;
  EulerZYX e;
  const double cb = std::hypot(r(0, 0), r(1, 0));
  e.b = std::atan2(-r(2, 0), cb);
  if (cb < kGimbalCos) {
    e.gimbal_locked = true;
    e.a = 0.0;
    // With a = 0: b = +pi/2 gives row 0 = (0, sin c, cos c), b = -pi/2
    // gives row 0 = (0, -sin c, -cos c); row 1 is (0, cos c, -sin c) in both.
    e.c = (r(2, 0) < 0.0) ? std::atan2(r(0, 1), r(1, 1)) : std::atan2(-r(0, 1), r(1, 1));
  } else {
    e.a = std::atan2(r(1, 0), r(0, 0));
    e.c = std::atan2(r(2, 1), r(2, 2));
  }
  e.a = wrap_angle(e.a);
  e.b = wrap_angle(e.b);
  e.c = wrap_angle(e.c);
  return e;
}

double Rotation::angle() const {
  const double cos_angle = std::clamp((m_.trace() - 1.0) / 2.0, -1.0, 1.0);
  return std::acos(cos_angle);
}

RigidPose RigidPose::from_xyzabc(double x, double y, double z, double a, double b, double c) {
  return RigidPose(Vec3(x, y, z), Rotation::from_euler(a, b, c));
}

Eigen::Matrix4d RigidPose::matrix() const {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = r_.matrix();
  m.topRightCorner<3, 1>() = t_;
  return m;
}

RigidPose RigidPose::inverse() const {
  const Rotation rt = r_.inverse();
  return RigidPose(-(rt * t_), rt);
}

Rotation euler_to_rotation(double a, double b, double c) { return Rotation::from_euler(a, b, c); }

EulerZYX rotation_to_euler(const Rotation& r) { return r.euler(); }

}  // namespace servokit
