#include "servokit/scanner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "number_format.hpp"
#include "servokit/errors.hpp"

namespace servokit {

using detail::put_number;

std::size_t AxisRange::count() const {
  return static_cast<std::size_t>(std::floor((max - min) / step + 1e-9)) + 1;
}

double AxisRange::value(std::size_t i) const {
  return std::min(min + static_cast<double>(i) * step, max);
}

void AxisRange::validate(const char* name) const {
  if (!(std::isfinite(min) && std::isfinite(max) && std::isfinite(step))) {
    throw ValidationError(std::string("grid.") + name + " bounds must be finite");
  }
  if (!(max >= min)) throw ValidationError(std::string("grid.") + name + "_max must be >= min");
  if (!(step > 0.0)) throw ValidationError(std::string("grid.") + name + "_step must be > 0");
}

void ScanGrid::validate() const {
  d.validate("d");
  l.validate("l");
  theta.validate("theta");
  phi.validate("phi");
}

void DetectOracle::validate() const {
  if (!(range_min > 0.0 && range_min < range_max)) {
    throw ValidationError("oracle: require 0 < range_min < range_max");
  }
  auto check_angle = [](double v, const char* name) {
    if (!(v > 0.0 && v < std::numbers::pi / 2)) {
      throw ValidationError(std::string("oracle.") + name + " must be in (0, 90) degrees");
    }
  };
  check_angle(fov_half_h, "fov_half_h");
  check_angle(fov_half_v, "fov_half_v");
  check_angle(incidence_max, "incidence_max");
}

RigidPose viewpoint_pose(double d, double l, double theta, double phi, const RigidPose& hole_in_world) {
  const Rotation looking_down = Rotation::about_x(std::numbers::pi);
  const RigidPose camera_in_hole(Vec3(l, 0.0, d),
                                 looking_down * Rotation::about_y(theta) * Rotation::about_x(phi));
  return hole_in_world * camera_in_hole;
}

std::vector<Viewpoint> generate_grid(const ScanGrid& grid, const RigidPose& hole_in_world) {
  grid.validate();
  const double total = static_cast<double>(grid.d.count()) * static_cast<double>(grid.l.count()) *
                       static_cast<double>(grid.theta.count()) * static_cast<double>(grid.phi.count());
  if (total > static_cast<double>(kMaxViewpoints)) {
    std::ostringstream msg;
    msg << "scan grid has " << total << " viewpoints (limit " << kMaxViewpoints << ")";
    throw GridTooLarge(msg.str(), static_cast<std::size_t>(std::min(total, 1e18)));
  }
  std::vector<Viewpoint> out;
  out.reserve(grid.size());
  for (std::size_t il = 0; il < grid.l.count(); ++il) {
    for (std::size_t id = 0; id < grid.d.count(); ++id) {
      for (std::size_t it = 0; it < grid.theta.count(); ++it) {
        for (std::size_t ip = 0; ip < grid.phi.count(); ++ip) {
          Viewpoint vp;
          vp.l = grid.l.value(il);
          vp.d = grid.d.value(id);
          vp.theta = grid.theta.value(it);
          vp.phi = grid.phi.value(ip);
          vp.camera_in_world = viewpoint_pose(vp.d, vp.l, vp.theta, vp.phi, hole_in_world);
          out.push_back(vp);
        }
      }
    }
  }
  return out;
}

ViewpointResult evaluate_viewpoint(const Viewpoint& vp, const DetectOracle& oracle,
                                   const RigidPose& hole_in_world) {
  const RigidPose hole_in_camera = vp.camera_in_world.inverse() * hole_in_world;
  const Vec3& q = hole_in_camera.translation();
  const double range = q.norm();
  const bool in_range = range >= oracle.range_min && range <= oracle.range_max;
  const bool in_fov = q.z() > 0.0 && std::atan2(std::abs(q.x()), q.z()) <= oracle.fov_half_h &&
                      std::atan2(std::abs(q.y()), q.z()) <= oracle.fov_half_v;
  // The camera must look against the hole axis, so compare -z_c with z_h.
  const Vec3 hole_axis_in_camera = hole_in_camera.rotation().matrix().col(2);
  const double incidence = std::acos(std::clamp(-hole_axis_in_camera.z(), -1.0, 1.0));
  const bool facing = incidence <= oracle.incidence_max;
  return {vp, in_range && in_fov && facing};
}

namespace {

void widen(std::optional<Span>& span, double v) {
  if (!span) {
    span = Span{v, v};
  } else {
    span->min = std::min(span->min, v);
    span->max = std::max(span->max, v);
  }
}

void put_span(std::ostream& os, const char* name, const std::optional<Span>& span, double scale,
              const char* unit) {
  os << name << ": ";
  if (!span) {
    os << "none\n";
    return;
  }
  put_number(os, span->min * scale);
  os << " .. ";
  put_number(os, span->max * scale);
  os << ' ' << unit << '\n';
}

}  // namespace

ScanReport run_scan(const ScanGrid& grid, const DetectOracle& oracle, const RigidPose& hole_in_world) {
  const std::vector<Viewpoint> viewpoints = generate_grid(grid, hole_in_world);
  ScanReport report;
  report.results.reserve(viewpoints.size());
  for (const Viewpoint& vp : viewpoints) {
    report.results.push_back(evaluate_viewpoint(vp, oracle, hole_in_world));
  }
  ScanSummary& s = report.summary;
  s.total = report.results.size();
  for (const ViewpointResult& r : report.results) {
    if (!r.found) continue;
    ++s.found;
    widen(s.d, r.viewpoint.d);
    widen(s.l, r.viewpoint.l);
    widen(s.theta, r.viewpoint.theta);
    widen(s.phi, r.viewpoint.phi);
  }
  return report;
}

void ScanReport::write_csv(std::ostream& os) const {
  os << "l,d,theta,phi,found\n";
  for (const ViewpointResult& r : results) {
    put_number(os, r.viewpoint.l);
    os << ',';
    put_number(os, r.viewpoint.d);
    os << ',';
    put_number(os, rad2deg(r.viewpoint.theta));
    os << ',';
    put_number(os, rad2deg(r.viewpoint.phi));
    os << ',' << (r.found ? '1' : '0') << '\n';
  }
}

void ScanReport::write_summary(std::ostream& os) const {
  os << "viewpoints: " << summary.total << '\n';
  os << "found: " << summary.found << '\n';
  put_span(os, "d", summary.d, 1.0, "m");
  put_span(os, "l", summary.l, 1.0, "m");
  put_span(os, "theta", summary.theta, rad2deg(1.0), "deg");
  put_span(os, "phi", summary.phi, rad2deg(1.0), "deg");
}

}  // namespace servokit
