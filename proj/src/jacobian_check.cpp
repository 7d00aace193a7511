#include "servokit/jacobian_check.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace servokit {

namespace {

Vec3 move_point(const Vec3& p, Generator g, JacobianVariant variant, double amount) {
  if (g == Generator::kB || g == Generator::kC) {
    return Rotation::about_axis(UnitVec3(generator_axis(g, variant)), amount) * p;
  }
  Vec3 out = p;
  out(static_cast<int>(g)) += amount;
  return out;
}

Vec3 sample_in_ball(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(-radius, radius);
  for (;;) {
    const Vec3 p(u(rng), u(rng), u(rng));
    if (p.norm() <= radius) return p;
  }
}

}  // namespace

Vector5 finite_difference_column(const Vec3& p1, const Vec3& p2, Generator g, JacobianVariant variant,
                                 double step) {
  const FeatureError plus = feature_error(move_point(p1, g, variant, step), move_point(p2, g, variant, step));
  const FeatureError minus =
      feature_error(move_point(p1, g, variant, -step), move_point(p2, g, variant, -step));
  return (plus.vector() - minus.vector()) / (2.0 * step);
}

JacobianCheckReport check_jacobian(const JacobianCheckOptions& options) {
  JacobianCheckReport report;
  report.trials = options.trials;
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> tiny(0.0, 1e-9);

  for (std::size_t trial = 0; trial < options.trials; ++trial) {
    Vec3 p1, p2;
    if (options.variant == JacobianVariant::kAsPrinted && trial % 10 == 0) {
      p1 = Vec3(tiny(rng), tiny(rng), tiny(rng));
      p2 = Vec3(0.0, 0.0, options.axis_offset) + Vec3(tiny(rng), tiny(rng), tiny(rng));
    } else {
      p1 = sample_in_ball(rng, options.point_radius);
      p2 = sample_in_ball(rng, options.point_radius);
    }

    const Jacobian5 j = build_jacobian(p1, p2, options.variant);
    for (int k = 0; k < 5; ++k) {
      const Vector5 fd = finite_difference_column(p1, p2, static_cast<Generator>(k), options.variant,
                                                  options.step);
      for (int row = 0; row < 5; ++row) {
        const double dev = std::abs(fd(row) - j(row, k)) / std::max(1.0, std::abs(j(row, k)));
        if (dev > report.max_deviation) {
          report.max_deviation = dev;
          report.worst_trial = trial;
        }
      }
    }
    const double cond = condition_number(j);
    if (!(cond <= options.cond_max)) report.near_singular.push_back({trial, p1, p2, cond});
  }
  return report;
}

}  // namespace servokit
