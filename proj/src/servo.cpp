#include "servokit/servo.hpp"

#include <Eigen/LU>

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "servokit/errors.hpp"

namespace servokit {

std::string_view to_string(JacobianVariant v) {
  return v == JacobianVariant::kCorrected ? "corrected" : "as_printed";
}

JacobianVariant parse_jacobian_variant(std::string_view name) {
  if (name == "corrected") return JacobianVariant::kCorrected;
  if (name == "as_printed") return JacobianVariant::kAsPrinted;
  throw ValidationError("unknown jacobian variant '" + std::string(name) +
                        "' (expected corrected or as_printed)");
}

Vec3 generator_axis(Generator g, JacobianVariant variant) {
  switch (g) {
    case Generator::kB:
      return Vec3::UnitY();
    case Generator::kC:
      return variant == JacobianVariant::kCorrected ? Vec3::UnitX() : Vec3::UnitZ();
    default:
      return Vec3::Zero();
  }
}

Vec3 generator_velocity(Generator g, const Vec3& p, JacobianVariant variant) {
  switch (g) {
    case Generator::kX:
      return Vec3::UnitX();
    case Generator::kY:
      return Vec3::UnitY();
    case Generator::kZ:
      return Vec3::UnitZ();
    case Generator::kB:
    case Generator::kC:
      return generator_axis(g, variant).cross(p);
  }
  return Vec3::Zero();
}

Jacobian5 build_jacobian(const Vec3& p1, const Vec3& p2, JacobianVariant variant) {
  // dp/dx for each point, one column per generator.
  auto point_jacobian = [variant](const Vec3& p) {
    Eigen::Matrix<double, 3, 5> d;
    for (int k = 0; k < 5; ++k) d.col(k) = generator_velocity(static_cast<Generator>(k), p, variant);
    return d;
  };
  const Eigen::Matrix<double, 3, 5> d1 = point_jacobian(p1);
  const Eigen::Matrix<double, 3, 5> d2 = point_jacobian(p2);

  Jacobian5 j;
  j.row(0) = plane_normal(1).transpose() * d1;  // e11
  j.row(1) = plane_normal(2).transpose() * d1;  // e12
  j.row(2) = plane_normal(1).transpose() * d2;  // e21
  j.row(3) = plane_normal(2).transpose() * d2;  // e22
  j.row(4) = plane_normal(3).transpose() * d1;  // e13
  return j;
}

double condition_number(const Jacobian5& j) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  if (!j.allFinite()) return kInf;
  const Eigen::PartialPivLU<Jacobian5> lu(j);
  const auto& u = lu.matrixLU();
  for (int k = 0; k < 5; ++k) {
    if (u(k, k) == 0.0) return kInf;
  }
  const Jacobian5 inv = lu.inverse();
  if (!inv.allFinite()) return kInf;
  auto norm1 = [](const Jacobian5& m) { return m.cwiseAbs().colwise().sum().maxCoeff(); };
  return norm1(j) * norm1(inv);
}

Vector5 newton_step(const FeatureError& e, const Jacobian5& j, double cond_max) {
  const double cond = condition_number(j);
  if (!(cond <= cond_max)) {
    std::ostringstream msg;
    msg << "feature Jacobian is ill-conditioned (cond1 = " << cond << ", limit " << cond_max << ")";
    throw IllConditioned(msg.str(), cond);
  }
  return Eigen::PartialPivLU<Jacobian5>(j).solve(e.vector());
}

void Limits::validate() const {
  auto require_positive = [](double v, const char* name) {
    if (!(std::isfinite(v) && v > 0.0)) {
      throw ValidationError(std::string("limits.") + name + " must be > 0");
    }
  };
  require_positive(v_max, "v_max");
  require_positive(w_max, "w_max");
  require_positive(period, "period");
  require_positive(gain_translation, "gain_translation");
  require_positive(gain_rotation, "gain_rotation");
  require_positive(deadband, "deadband");
  require_positive(cond_max, "cond_max");
  if (deadband >= 0.01 * max_translation_step()) {
    throw ValidationError("limits.deadband must be much smaller than v_max * period");
  }
}

namespace {

// Scales `block` to magnitude min(gain * |block|, cap), preserving direction.
template <typename Block>
Block limit_block(const Block& block, double gain, double cap, double deadband, bool& saturated) {
  saturated = false;
  const double norm = block.norm();
  if (!(norm >= deadband)) return Block::Zero();
  const double candidate = gain * norm;
  double magnitude = candidate;
  if (candidate >= cap) {
    magnitude = cap;
    saturated = true;
  }
  Block out = (magnitude / norm) * block;
  // Rounding in the scale can leave |out| a few ulps above the cap.
  const double out_norm = out.norm();
  if (out_norm > cap) out *= cap / out_norm;
  return out;
}

}  // namespace

Correction limit_corrections(const Vector5& raw, const Limits& limits) {
  Correction c;
  c.translation = limit_block<Vec3>(raw.head<3>(), limits.gain_translation,
                                    limits.max_translation_step(), limits.deadband, c.saturated_t);
  const Eigen::Vector2d rot =
      limit_block<Eigen::Vector2d>(raw.tail<2>(), limits.gain_rotation,
                                   limits.max_rotation_step(), limits.deadband, c.saturated_r);
  c.db = rot(0);
  c.dc = rot(1);
  return c;
}

ServoOutput servo_step(const HoleObservation& obs, const GoalSpec& goal, const RigidPose& hand_eye,
                       const Limits& limits, JacobianVariant variant) {
  ServoOutput out;
  out.diagnostics.points = hole_points_in_goal_frame(obs, hand_eye, goal);
  const HolePoints& pts = out.diagnostics.points;
  out.error = feature_error(pts);
  const Jacobian5 j = build_jacobian(pts.p1, pts.p2, variant);
  out.diagnostics.condition = condition_number(j);
  out.diagnostics.raw_step = newton_step(out.error, j, limits.cond_max);
  out.correction = limit_corrections(out.diagnostics.raw_step, limits);
  return out;
}

}  // namespace servokit
