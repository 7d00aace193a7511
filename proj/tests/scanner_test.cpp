#include "servokit/scanner.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "servokit/errors.hpp"

namespace servokit {
namespace {

ScanGrid default_grid() {
  ScanGrid g;
  g.d = {0.30, 1.20, 0.30};
  g.l = {0.0, 0.45, 0.15};
  g.theta = {deg2rad(-10.0), deg2rad(10.0), deg2rad(10.0)};
  g.phi = {deg2rad(-10.0), deg2rad(10.0), deg2rad(10.0)};
  return g;
}

Viewpoint at(double d, double l, double theta, double phi) {
  return {d, l, theta, phi, viewpoint_pose(d, l, theta, phi, RigidPose::identity())};
}

TEST(AxisRange, Counts) {
  EXPECT_EQ((AxisRange{0.30, 1.20, 0.30}.count()), 4u);
  EXPECT_EQ((AxisRange{0.0, 0.45, 0.15}.count()), 4u);
  EXPECT_EQ((AxisRange{0.5, 0.5, 0.1}.count()), 1u);
  EXPECT_EQ((AxisRange{0.0, 1.0, 0.3}.count()), 4u);
  EXPECT_DOUBLE_EQ((AxisRange{0.30, 1.20, 0.30}.value(3)), 1.20);
}

TEST(AxisRange, Validation) {
  EXPECT_THROW((AxisRange{1.0, 0.0, 0.1}.validate("d")), ValidationError);
  EXPECT_THROW((AxisRange{0.0, 1.0, 0.0}.validate("d")), ValidationError);
}

TEST(GenerateGrid, DefaultLatticeHas144Points) {
  const auto vps = generate_grid(default_grid(), RigidPose::identity());
  ASSERT_EQ(vps.size(), 144u);
  EXPECT_EQ(default_grid().size(), 144u);
  // l outermost, phi innermost.
  EXPECT_EQ(vps[0].l, 0.0);
  EXPECT_NEAR(vps[1].phi, 0.0, 1e-15);
  EXPECT_EQ(vps[1].theta, vps[0].theta);
  EXPECT_NEAR(vps[9].d, 0.6, 1e-15);
  EXPECT_NEAR(vps[36].l, 0.15, 1e-15);
}

TEST(GenerateGrid, SingleLocationNineViews) {
  ScanGrid g = default_grid();
  g.d = {0.6, 0.6, 0.3};
  g.l = {0.0, 0.0, 0.15};
  EXPECT_EQ(generate_grid(g, RigidPose::identity()).size(), 9u);
}

TEST(GenerateGrid, DegenerateGrid) {
  ScanGrid g;
  g.d = {0.6, 0.6, 1.0};
  g.l = {0.1, 0.1, 1.0};
  g.theta = {0.0, 0.0, 1.0};
  g.phi = {0.0, 0.0, 1.0};
  EXPECT_EQ(generate_grid(g, RigidPose::identity()).size(), 1u);
}

TEST(GenerateGrid, TooLarge) {
  ScanGrid g;
  g.d = {0.0, 1.0, 0.001};
  g.l = {0.0, 1.0, 0.001};
  g.theta = {0.0, 0.0, 1.0};
  g.phi = {0.0, 0.0, 1.0};
  EXPECT_THROW(generate_grid(g, RigidPose::identity()), GridTooLarge);
}

TEST(ViewpointPose, OnAxisLooksAtHole) {
  const RigidPose cam = viewpoint_pose(0.6, 0.0, 0.0, 0.0, RigidPose::identity());
  EXPECT_LT((cam.translation() - Vec3(0, 0, 0.6)).norm(), 1e-15);
  const Vec3 optical_axis = cam.rotation().matrix().col(2);
  EXPECT_LT((optical_axis - Vec3(0, 0, -1)).norm(), 1e-15);
  const Vec3 offset = viewpoint_pose(0.6, 0.15, 0.0, 0.0, RigidPose::identity()).translation();
  EXPECT_LT((offset - Vec3(0.15, 0, 0.6)).norm(), 1e-15);
}

TEST(ViewpointPose, FollowsHolePose) {
  const RigidPose hole = RigidPose::from_xyzabc(1.0, 2.0, 0.5, 0.3, 0.2, -0.1);
  const RigidPose local = viewpoint_pose(0.6, 0.15, 0.1, -0.05, RigidPose::identity());
  const RigidPose world = viewpoint_pose(0.6, 0.15, 0.1, -0.05, hole);
  EXPECT_LT(((hole * local).matrix() - world.matrix()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(EvaluateViewpoint, Examples) {
  const DetectOracle o;
  EXPECT_TRUE(evaluate_viewpoint(at(0.6, 0, 0, 0), o, RigidPose::identity()).found);
  EXPECT_FALSE(evaluate_viewpoint(at(0.1, 0, 0, 0), o, RigidPose::identity()).found);
  EXPECT_FALSE(evaluate_viewpoint(at(0.6, 0, deg2rad(80.0), 0), o, RigidPose::identity()).found);
  EXPECT_FALSE(evaluate_viewpoint(at(3.5, 0, 0, 0), o, RigidPose::identity()).found);
}

TEST(EvaluateViewpoint, IncidenceLimit) {
  // Far off to the side and tilted so the hole stays centered but is seen obliquely.
  DetectOracle o;
  o.fov_half_h = deg2rad(89.0);
  const double tilt = deg2rad(40.0);
  const Viewpoint vp = at(1.0, 1.0 * std::tan(tilt), -tilt, 0.0);
  const bool wide = evaluate_viewpoint(vp, o, RigidPose::identity()).found;
  o.incidence_max = deg2rad(45.0);
  EXPECT_FALSE(wide);
  EXPECT_TRUE(evaluate_viewpoint(vp, o, RigidPose::identity()).found);
}

TEST(RunScan, DefaultGridOnAxisColumnFound) {
  const ScanReport r = run_scan(default_grid(), DetectOracle{}, RigidPose::identity());
  ASSERT_EQ(r.results.size(), 144u);
  int column = 0;
  for (const ViewpointResult& v : r.results) {
    const Viewpoint& p = v.viewpoint;
    if (p.l == 0.0 && std::abs(p.theta) < 1e-12 && std::abs(p.phi) < 1e-12) {
      ++column;
      EXPECT_TRUE(v.found) << p.d;
    }
  }
  EXPECT_EQ(column, 4);
  ASSERT_TRUE(r.summary.d.has_value());
  EXPECT_LE(r.summary.d->min, 0.3 + 1e-12);
  EXPECT_GE(r.summary.d->max, 1.2 - 1e-12);
  EXPECT_EQ(r.summary.total, 144u);
}

TEST(RunScan, ZeroRangeFindsNothing) {
  DetectOracle o;
  o.range_max = 0.0;
  const ScanReport r = run_scan(default_grid(), o, RigidPose::identity());
  EXPECT_EQ(r.summary.found, 0u);
  EXPECT_FALSE(r.summary.d.has_value());
  std::ostringstream os;
  r.write_summary(os);
  EXPECT_NE(os.str().find("d: none"), std::string::npos);
}

TEST(RunScan, SingleViewpointSummaryCollapses) {
  ScanGrid g;
  g.d = {0.6, 0.6, 1.0};
  g.l = {0.0, 0.0, 1.0};
  g.theta = {0.0, 0.0, 1.0};
  g.phi = {0.0, 0.0, 1.0};
  const ScanReport r = run_scan(g, DetectOracle{}, RigidPose::identity());
  ASSERT_EQ(r.summary.found, 1u);
  EXPECT_EQ(r.summary.d->min, 0.6);
  EXPECT_EQ(r.summary.d->max, 0.6);
  EXPECT_EQ(r.summary.l->min, r.summary.l->max);
  EXPECT_EQ(r.summary.theta->min, r.summary.theta->max);
}

TEST(RunScanProperty, RelaxingOracleNeverLosesDetections) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    ScanGrid g;
    g.d = {0.1 + u(rng), 0.1 + u(rng) + 1.5, 0.2 + 0.3 * u(rng)};
    g.l = {-0.5 * u(rng), 0.5 * u(rng), 0.1 + 0.2 * u(rng)};
    g.theta = {-deg2rad(30 * u(rng)), deg2rad(30 * u(rng)), deg2rad(5 + 10 * u(rng))};
    g.phi = {-deg2rad(30 * u(rng)), deg2rad(30 * u(rng)), deg2rad(5 + 10 * u(rng))};
    DetectOracle tight;
    tight.range_min = 0.2 + 0.5 * u(rng);
    tight.range_max = tight.range_min + 0.5 + u(rng);
    tight.fov_half_h = deg2rad(10 + 40 * u(rng));
    tight.fov_half_v = deg2rad(10 + 40 * u(rng));
    tight.incidence_max = deg2rad(5 + 40 * u(rng));
    DetectOracle loose = tight;
    switch (trial % 5) {
      case 0: loose.range_min *= u(rng); break;
      case 1: loose.range_max += u(rng); break;
      case 2: loose.fov_half_h = std::min(deg2rad(89.0), loose.fov_half_h + deg2rad(20 * u(rng))); break;
      case 3: loose.fov_half_v = std::min(deg2rad(89.0), loose.fov_half_v + deg2rad(20 * u(rng))); break;
      default: loose.incidence_max = std::min(deg2rad(89.0), loose.incidence_max + deg2rad(20 * u(rng)));
    }
    const ScanReport a = run_scan(g, tight, RigidPose::identity());
    const ScanReport b = run_scan(g, loose, RigidPose::identity());
    ASSERT_EQ(a.results.size(), g.size());
    ASSERT_EQ(a.results.size(), b.results.size());
    for (std::size_t i = 0; i < a.results.size(); ++i) {
      ASSERT_TRUE(!a.results[i].found || b.results[i].found) << trial << ' ' << i;
    }
  }
}

TEST(ScanReport, CsvUsesDegrees) {
  const ScanReport r = run_scan(default_grid(), DetectOracle{}, RigidPose::identity());
  std::ostringstream os;
  r.write_csv(os);
  std::istringstream is(os.str());
  std::string header, first;
  std::getline(is, header);
  std::getline(is, first);
  EXPECT_EQ(header, "l,d,theta,phi,found");
  EXPECT_EQ(first.substr(0, 14), "0,0.3,-10,-10,");
  const std::string text = os.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 145);
}

}  // namespace
}  // namespace servokit
