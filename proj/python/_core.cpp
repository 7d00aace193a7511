#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>
#include <string>

#include "servokit/config.hpp"
#include "servokit/errors.hpp"
#include "servokit/jacobian_check.hpp"
#include "servokit/plant.hpp"
#include "servokit/scanner.hpp"
#include "servokit/se3.hpp"
#include "servokit/servo.hpp"

namespace py = pybind11;
using namespace servokit;

namespace {

// One row per period, columns as in TrajectoryLog::kCsvHeader (angles in degrees).
Eigen::MatrixXd log_to_array(const TrajectoryLog& log) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(log.records.size()), 20);
  for (std::size_t k = 0; k < log.records.size(); ++k) {
    const TrajectoryRecord& r = log.records[k];
    const Vec3& p = r.hole_in_flange.translation();
    const EulerZYX e = r.hole_in_flange.euler();
    const Correction& c = r.correction;
    out.row(static_cast<Eigen::Index>(k)) << r.t, p.x(), p.y(), p.z(), rad2deg(e.a), rad2deg(e.b), rad2deg(e.c),
        r.error.e11, r.error.e12, r.error.e21, r.error.e22, r.error.e13, c.translation.x(), c.translation.y(),
        c.translation.z(), rad2deg(c.db), rad2deg(c.dc), c.saturated_t, c.saturated_r, r.obs_valid;
  }
  return out;
}

template <typename T>
std::string csv_of(const T& obj) {
  std::ostringstream os;
  obj.write_csv(os);
  return os.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Feature-based visual servoing toolkit";

  auto base = py::register_exception<ServokitError>(m, "ServokitError", PyExc_RuntimeError);
  py::register_exception<InvalidObservation>(m, "InvalidObservation", base.ptr());
  py::register_exception<IllConditioned>(m, "IllConditioned", base.ptr());
  py::register_exception<GridTooLarge>(m, "GridTooLarge", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());

  m.def("euler_to_rotation", [](double a, double b, double c) { return Rotation::from_euler(a, b, c).matrix(); },
        py::arg("a"), py::arg("b"), py::arg("c"), "Rz(a) Ry(b) Rx(c) as a 3x3 matrix (radians).");
  m.def("rotation_to_euler",
        [](const Mat3& r) {
          const EulerZYX e = Rotation::from_matrix(r).euler();
          return py::make_tuple(e.a, e.b, e.c);
        },
        py::arg("matrix"));
  m.def("wrap_angle", &wrap_angle);

  py::class_<RigidPose>(m, "Pose")
      .def(py::init([](const Vec3& t, const Mat3& r) { return RigidPose(t, Rotation::from_matrix(r)); }),
           py::arg("translation") = Vec3::Zero(), py::arg("rotation") = Mat3::Identity())
      .def_static("from_xyzabc", &RigidPose::from_xyzabc, py::arg("x"), py::arg("y"), py::arg("z"), py::arg("a"),
                  py::arg("b"), py::arg("c"))
      .def_static("identity", &RigidPose::identity)
      .def_property_readonly("translation", [](const RigidPose& p) { return p.translation(); })
      .def_property_readonly("rotation", [](const RigidPose& p) { return p.rotation().matrix(); })
      .def_property_readonly("matrix", &RigidPose::matrix)
      .def("euler",
           [](const RigidPose& p) {
             const EulerZYX e = p.euler();
             return py::make_tuple(e.a, e.b, e.c);
           })
      .def("inverse", &RigidPose::inverse)
      .def("__mul__", [](const RigidPose& a, const RigidPose& b) { return a * b; })
      .def("transform", [](const RigidPose& p, const Vec3& v) { return p * v; })
      .def("__repr__", [](const RigidPose& p) {
        const Vec3& t = p.translation();
        const EulerZYX e = p.euler();
        std::ostringstream os;
        os << "Pose(x=" << t.x() << ", y=" << t.y() << ", z=" << t.z() << ", a=" << e.a << ", b=" << e.b
           << ", c=" << e.c << ")";
        return os.str();
      });

  py::enum_<JacobianVariant>(m, "JacobianVariant")
      .value("corrected", JacobianVariant::kCorrected)
      .value("as_printed", JacobianVariant::kAsPrinted);

  py::class_<GoalSpec>(m, "GoalSpec")
      .def(py::init<RigidPose, double>(), py::arg("desired_hole_in_flange"), py::arg("axis_offset") = 0.1)
      .def_readwrite("desired_hole_in_flange", &GoalSpec::desired_hole_in_flange)
      .def_readwrite("axis_offset", &GoalSpec::axis_offset);

  py::class_<HoleObservation>(m, "HoleObservation")
      .def(py::init([](const RigidPose& p, double t, bool valid) { return HoleObservation{p, t, valid}; }),
           py::arg("hole_in_camera"), py::arg("timestamp") = 0.0, py::arg("valid") = true)
      .def_readwrite("hole_in_camera", &HoleObservation::hole_in_camera)
      .def_readwrite("timestamp", &HoleObservation::timestamp)
      .def_readwrite("valid", &HoleObservation::valid);

  m.def("hole_points",
        [](const HoleObservation& obs, const RigidPose& hand_eye, const GoalSpec& goal) {
          const HolePoints p = hole_points_in_goal_frame(obs, hand_eye, goal);
          return py::make_tuple(p.p1, p.p2);
        },
        py::arg("observation"), py::arg("hand_eye"), py::arg("goal"));
  m.def("feature_error", [](const Vec3& p1, const Vec3& p2) { return feature_error(p1, p2).vector(); },
        py::arg("p1"), py::arg("p2"), "(e11, e12, e21, e22, e13)");
  m.def("build_jacobian", &build_jacobian, py::arg("p1"), py::arg("p2"),
        py::arg("variant") = JacobianVariant::kCorrected);
  m.def("condition_number", &condition_number);
  m.def("newton_step",
        [](const Vector5& e, const Jacobian5& j, double cond_max) {
          return newton_step(FeatureError::from_vector(e), j, cond_max);
        },
        py::arg("error"), py::arg("jacobian"), py::arg("cond_max") = 1e8);

  py::class_<Limits>(m, "Limits")
      .def(py::init<>())
      .def_readwrite("v_max", &Limits::v_max)
      .def_readwrite("w_max", &Limits::w_max)
      .def_readwrite("period", &Limits::period)
      .def_readwrite("gain_translation", &Limits::gain_translation)
      .def_readwrite("gain_rotation", &Limits::gain_rotation)
      .def_readwrite("deadband", &Limits::deadband)
      .def_readwrite("cond_max", &Limits::cond_max)
      .def("validate", &Limits::validate);

  py::class_<Correction>(m, "Correction")
      .def_property_readonly("translation", [](const Correction& c) { return c.translation; })
      .def_readonly("db", &Correction::db)
      .def_readonly("dc", &Correction::dc)
      .def_readonly("saturated_t", &Correction::saturated_t)
      .def_readonly("saturated_r", &Correction::saturated_r)
      .def("vector", &Correction::vector)
      .def("is_zero", &Correction::is_zero);

  m.def("limit_corrections", &limit_corrections, py::arg("raw"), py::arg("limits"));
  m.def("servo_step",
        [](const HoleObservation& obs, const GoalSpec& goal, const RigidPose& hand_eye, const Limits& limits,
           JacobianVariant variant) {
          const ServoOutput out = servo_step(obs, goal, hand_eye, limits, variant);
          py::dict d;
          d["correction"] = out.correction;
          d["error"] = out.error.vector();
          d["raw_step"] = out.diagnostics.raw_step;
          d["condition"] = out.diagnostics.condition;
          return d;
        },
        py::arg("observation"), py::arg("goal"), py::arg("hand_eye"), py::arg("limits"),
        py::arg("variant") = JacobianVariant::kCorrected);

  py::class_<SensorModel>(m, "SensorModel")
      .def(py::init<>())
      .def_readwrite("hand_eye", &SensorModel::hand_eye)
      .def_readwrite("sigma_t", &SensorModel::sigma_t)
      .def_readwrite("sigma_r", &SensorModel::sigma_r)
      .def_readwrite("latency_steps", &SensorModel::latency_steps)
      .def_readwrite("dropout_prob", &SensorModel::dropout_prob)
      .def_readwrite("seed", &SensorModel::seed);

  py::class_<RunConfig>(m, "RunConfig")
      .def_readwrite("goal", &RunConfig::goal)
      .def_readwrite("limits", &RunConfig::limits)
      .def_readwrite("sensor", &RunConfig::sensor)
      .def_readwrite("initial_hole_in_flange", &RunConfig::initial_hole_in_flange)
      .def_readwrite("duration", &RunConfig::duration)
      .def_readwrite("servo_start", &RunConfig::servo_start)
      .def_readwrite("variant", &RunConfig::variant)
      .def("to_text", &format_config);

  m.def("load_config", &load_config, py::arg("path"));
  m.def("parse_config", [](const std::string& text) { return parse_config(text); }, py::arg("text"));

  m.attr("TRAJECTORY_COLUMNS") = std::string(TrajectoryLog::kCsvHeader);
  m.def("run_closed_loop",
        [](const RunConfig& cfg) {
          const TrajectoryLog log = run_closed_loop(cfg.initial_state(), cfg.goal, cfg.limits, cfg.sensor,
                                                    cfg.loop_options());
          return log_to_array(log);
        },
        py::arg("config"),
        "Runs the closed loop; returns an (n, 20) array with columns TRAJECTORY_COLUMNS.");
  m.def("trajectory_csv",
        [](const RunConfig& cfg) {
          return csv_of(run_closed_loop(cfg.initial_state(), cfg.goal, cfg.limits, cfg.sensor,
                                        cfg.loop_options()));
        },
        py::arg("config"));

  m.def("run_scan",
        [](const std::filesystem::path& path) {
          const ScanConfig cfg = load_scan_config(path);
          const ScanReport report = run_scan(cfg.grid, cfg.oracle, cfg.hole_in_world);
          Eigen::MatrixXd rows(static_cast<Eigen::Index>(report.results.size()), 5);
          for (std::size_t i = 0; i < report.results.size(); ++i) {
            const Viewpoint& v = report.results[i].viewpoint;
            rows.row(static_cast<Eigen::Index>(i)) << v.l, v.d, rad2deg(v.theta), rad2deg(v.phi),
                report.results[i].found;
          }
          return rows;
        },
        py::arg("config_path"), "Returns an (n, 5) array with columns l, d, theta, phi, found.");

  m.def("check_jacobian",
        [](JacobianVariant variant, std::size_t trials, std::uint64_t seed) {
          JacobianCheckOptions opts;
          opts.variant = variant;
          opts.trials = trials;
          opts.seed = seed;
          const JacobianCheckReport r = check_jacobian(opts);
          py::dict d;
          d["max_deviation"] = r.max_deviation;
          d["near_singular"] = r.near_singular.size();
          d["passed"] = r.passed(opts.tolerance);
          return d;
        },
        py::arg("variant") = JacobianVariant::kCorrected, py::arg("trials") = 1000, py::arg("seed") = 0);
}
