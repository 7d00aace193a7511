#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "servokit/servo.hpp"

namespace servokit {

struct JacobianCheckOptions {
  JacobianVariant variant = JacobianVariant::kCorrected;
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  double step = 1e-6;          // central-difference step, m or rad
  double tolerance = 1e-6;     // pass threshold on the worst deviation
  double point_radius = 2.0;   // sampled points satisfy |p| <= radius
  double axis_offset = 0.1;    // used for the near-aligned samples
  double cond_max = 1e8;
};

struct NearSingularSample {
  std::size_t trial = 0;
  Vec3 p1 = Vec3::Zero();
  Vec3 p2 = Vec3::Zero();
  double condition = 0.0;
};

struct JacobianCheckReport {
  std::size_t trials = 0;
  // Worst |fd - analytic| / max(1, |analytic|) over all entries and trials.
  double max_deviation = 0.0;
  std::size_t worst_trial = 0;
  std::vector<NearSingularSample> near_singular;

  bool passed(double tolerance) const { return max_deviation <= tolerance; }
};

/// Central-difference feature error derivative along one generator, moving
/// both points forward by +/- step (translation, or rotation about the
/// generator axis through the goal-frame origin).
Vector5 finite_difference_column(const Vec3& p1, const Vec3& p2, Generator g, JacobianVariant variant,
                                 double step);

/// Compares build_jacobian with central differences on random point pairs.
/// For kAsPrinted every tenth sample is placed near alignment so the
/// degenerate configurations show up in `near_singular`.
JacobianCheckReport check_jacobian(const JacobianCheckOptions& options);

}  // namespace servokit
