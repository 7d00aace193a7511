#include "servokit/plant.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "number_format.hpp"
#include "servokit/errors.hpp"

namespace servokit {

using detail::put_number;

void SensorModel::validate() const {
  if (!(std::isfinite(sigma_t) && sigma_t >= 0.0)) throw ValidationError("sensor.sigma_t must be >= 0");
  if (!(std::isfinite(sigma_r) && sigma_r >= 0.0)) throw ValidationError("sensor.sigma_r must be >= 0");
  if (latency_steps < 0) throw ValidationError("sensor.latency_steps must be >= 0");
  if (!(dropout_prob >= 0.0 && dropout_prob < 1.0)) {
    throw ValidationError("sensor.dropout_prob must be in [0, 1)");
  }
}

SyntheticCamera::SyntheticCamera(SensorModel model) : model_(std::move(model)), rng_(model_.seed) {
  model_.validate();
}

HoleObservation SyntheticCamera::observe(const WorldState& state) {
  const RigidPose camera_in_world = state.flange_in_world * model_.hand_eye;
  history_.push_back({camera_in_world.inverse() * state.hole_in_world, state.t});
  while (history_.size() > static_cast<std::size_t>(model_.latency_steps) + 1) history_.pop_front();
  const Sample& sample = history_.front();

  // Fixed draw order per call, independent of the configured sigmas, so the
  // stream stays aligned when noise or dropout is toggled.
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double u = uniform(rng_);
  Vec3 dt;
  for (int k = 0; k < 3; ++k) dt(k) = normal(rng_);
  Vec3 axis;
  for (int k = 0; k < 3; ++k) axis(k) = normal(rng_);
  const double angle = normal(rng_);

  HoleObservation obs;
  obs.timestamp = sample.t;
  obs.valid = !(u < model_.dropout_prob);
  obs.hole_in_camera = sample.hole_in_camera;
  if (model_.sigma_t > 0.0 || model_.sigma_r > 0.0) {
    Rotation noise_r;
    if (model_.sigma_r > 0.0 && axis.norm() > 0.0) {
      noise_r = Rotation::about_axis(UnitVec3(axis), model_.sigma_r * angle);
    }
    // Perturbation expressed in the camera frame.
    obs.hole_in_camera = RigidPose(sample.hole_in_camera.translation() + model_.sigma_t * dt,
                                   noise_r * sample.hole_in_camera.rotation());
  }
  return obs;
}

WorldState apply_correction(const WorldState& state, const Correction& corr, const GoalSpec& goal,
                            JacobianVariant variant) {
  if (corr.is_zero()) return state;
  const Rotation rc = variant == JacobianVariant::kCorrected ? Rotation::about_x(corr.dc)
                                                             : Rotation::about_z(corr.dc);
  const RigidPose motion(corr.translation, Rotation::about_y(corr.db) * rc);
  const RigidPose& goal_in_flange = goal.desired_hole_in_flange;
  WorldState next = state;
  next.flange_in_world = state.flange_in_world * goal_in_flange * motion * goal_in_flange.inverse();
  return next;
}

void TrajectoryLog::write_csv(std::ostream& os) const {
  os << kCsvHeader << '\n';
  for (const TrajectoryRecord& r : records) {
    const Vec3& p = r.hole_in_flange.translation();
    const EulerZYX e = r.hole_in_flange.euler();
    const double fields[] = {r.t,
                             p.x(),
                             p.y(),
                             p.z(),
                             rad2deg(e.a),
                             rad2deg(e.b),
                             rad2deg(e.c),
                             r.error.e11,
                             r.error.e12,
                             r.error.e21,
                             r.error.e22,
                             r.error.e13,
                             r.correction.translation.x(),
                             r.correction.translation.y(),
                             r.correction.translation.z(),
                             rad2deg(r.correction.db),
                             rad2deg(r.correction.dc)};
    for (double f : fields) {
      put_number(os, f);
      os << ',';
    }
    os << (r.correction.saturated_t ? '1' : '0') << ',' << (r.correction.saturated_r ? '1' : '0')
       << ',' << (r.obs_valid ? '1' : '0') << '\n';
  }
}

TrajectoryLog run_closed_loop(const WorldState& initial, const GoalSpec& goal, const Limits& limits,
                              const SensorModel& sensor, const LoopOptions& options) {
  goal.validate();
  limits.validate();
  if (!(options.duration > options.servo_start && options.servo_start >= 0.0)) {
    throw ValidationError("run: duration must exceed servo_start >= 0");
  }
  const auto steps = static_cast<long long>(std::llround(options.duration / limits.period));
  const auto start_step = static_cast<long long>(std::ceil(options.servo_start / limits.period - 1e-9));

  SyntheticCamera camera(sensor);
  TrajectoryLog log;
  log.records.reserve(static_cast<std::size_t>(steps));

  WorldState state = initial;
  FeatureError last_error;
  bool have_error = false;
  int failures = 0;
  for (long long k = 0; k < steps; ++k) {
    state.t = static_cast<double>(k) * limits.period;
    const HoleObservation obs = camera.observe(state);

    TrajectoryRecord rec;
    rec.t = state.t;
    rec.hole_in_flange = state.hole_in_flange();
    rec.obs_valid = obs.valid;

    if (obs.valid) {
      if (k >= start_step) {
        try {
          const ServoOutput out = servo_step(obs, goal, sensor.hand_eye, limits, options.variant);
          rec.correction = out.correction;
          last_error = out.error;
          failures = 0;
        } catch (const IllConditioned& err) {
          last_error = feature_error(hole_points_in_goal_frame(obs, sensor.hand_eye, goal));
          if (++failures > options.max_consecutive_failures) {
            rec.error = last_error;
            log.records.push_back(rec);
            std::ostringstream msg;
            msg << "servo aborted at t = " << state.t << " s after " << failures
                << " consecutive ill-conditioned periods: " << err.what();
            throw LoopAborted(msg.str(), err.condition(), std::move(log));
          }
        }
      } else {
        last_error = feature_error(hole_points_in_goal_frame(obs, sensor.hand_eye, goal));
      }
      have_error = true;
    }
    // A dropped frame repeats the last known error (zero before the first fix).
    rec.error = have_error ? last_error : FeatureError{};
    log.records.push_back(rec);
    state = apply_correction(state, rec.correction, goal, options.variant);
  }
  return log;
}

}  // namespace servokit
