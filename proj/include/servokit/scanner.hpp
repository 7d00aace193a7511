#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "servokit/se3.hpp"

namespace servokit {

/// Inclusive lattice min, min + step, ..., up to max.
struct AxisRange {
  double min = 0.0;
  double max = 0.0;
  double step = 1.0;

  /// floor((max - min) / step) + 1, with a 1e-9 tolerance so decimal steps
  /// such as 0.3 m do not lose their last sample to rounding.
  std::size_t count() const;
  double value(std::size_t i) const;
  void validate(const char* name) const;
};

/// Viewpoint lattice around the hole. d runs along the hole z-axis, l along
/// the hole x-axis; theta tilts the camera about its own y-axis, phi about
/// its own x-axis. Lengths in meters, angles in radians.
struct ScanGrid {
  AxisRange d;
  AxisRange l;
  AxisRange theta;
  AxisRange phi;

  std::size_t size() const { return d.count() * l.count() * theta.count() * phi.count(); }
  void validate() const;
};

/// Analytic stand-in for the hole detector.
struct DetectOracle {
  double range_min = 0.3;                  // m
  double range_max = 3.0;                  // m
  double fov_half_h = deg2rad(43.0);       // rad, about camera y
  double fov_half_v = deg2rad(29.0);       // rad, about camera x
  double incidence_max = deg2rad(30.0);    // rad, optical axis vs. hole axis

  void validate() const;
};

struct Viewpoint {
  double d = 0.0;
  double l = 0.0;
  double theta = 0.0;
  double phi = 0.0;
  RigidPose camera_in_world;
};

struct ViewpointResult {
  Viewpoint viewpoint;
  bool found = false;
};

struct Span {
  double min = 0.0;
  double max = 0.0;
};

struct ScanSummary {
  std::size_t total = 0;
  std::size_t found = 0;
  // Per-axis extent over found viewpoints; empty when nothing was found.
  std::optional<Span> d;
  std::optional<Span> l;
  std::optional<Span> theta;
  std::optional<Span> phi;
};

struct ScanReport {
  std::vector<ViewpointResult> results;
  ScanSummary summary;

  /// Header `l,d,theta,phi,found`; meters and degrees.
  void write_csv(std::ostream& os) const;
  void write_summary(std::ostream& os) const;
};

inline constexpr std::size_t kMaxViewpoints = 1'000'000;

/// Camera pose for one lattice point. The camera starts at (l, 0, d) in the
/// hole frame looking back along -z_h, then turns by theta about its y-axis
/// and phi about its x-axis.
RigidPose viewpoint_pose(double d, double l, double theta, double phi, const RigidPose& hole_in_world);

/// Ordered l (outermost), d, theta, phi (innermost).
/// Throws GridTooLarge above kMaxViewpoints.
std::vector<Viewpoint> generate_grid(const ScanGrid& grid, const RigidPose& hole_in_world);

ViewpointResult evaluate_viewpoint(const Viewpoint& vp, const DetectOracle& oracle,
                                   const RigidPose& hole_in_world);

ScanReport run_scan(const ScanGrid& grid, const DetectOracle& oracle, const RigidPose& hole_in_world);

}  // namespace servokit
