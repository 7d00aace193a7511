#include "servokit/commands.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace servokit::cli {
namespace {

namespace fs = std::filesystem;

const fs::path kConfigDir = SERVOKIT_CONFIG_DIR;
const fs::path kTool = SERVOKIT_TOOL_PATH;

class CommandsTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("servokit_cmd_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  static int run_tool(const std::string& args) {
    const std::string cmd = "\"" + kTool.string() + "\" " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
  }

  fs::path dir_;
};

std::string short_run_config(const std::string& extra_sensor = "") {
  std::ifstream in(kConfigDir / "paper_sec4.cfg");
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  text.replace(text.find("duration = 25"), 13, "duration = 5");
  if (!extra_sensor.empty()) text.replace(text.find("sigma_t = 0"), 11, extra_sensor);
  return text;
}

TEST_F(CommandsTest, ServoWritesCsv) {
  const fs::path cfg = write("run.cfg", short_run_config());
  const fs::path out = dir_ / "run.csv";
  ASSERT_EQ(cmd_servo({cfg, out, std::nullopt}), kExitOk);
  const std::string csv = slurp(out);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,x,y,z,a,b,c,e11,e12,e21,e22,e13,dx,dy,dz,db,dc,sat_t,sat_r,obs_valid");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1251);
}

TEST_F(CommandsTest, ServoIsByteIdenticalWithNoise) {
  const fs::path cfg = write("noisy.cfg", short_run_config("sigma_t = 0.001"));
  ASSERT_EQ(cmd_servo({cfg, dir_ / "a.csv", 42}), kExitOk);
  ASSERT_EQ(cmd_servo({cfg, dir_ / "b.csv", 42}), kExitOk);
  ASSERT_EQ(cmd_servo({cfg, dir_ / "c.csv", 43}), kExitOk);
  EXPECT_EQ(slurp(dir_ / "a.csv"), slurp(dir_ / "b.csv"));
  EXPECT_NE(slurp(dir_ / "a.csv"), slurp(dir_ / "c.csv"));
}

TEST_F(CommandsTest, ServoConfigErrorExitsOne) {
  EXPECT_EQ(cmd_servo({write("empty.cfg", ""), dir_ / "x.csv", std::nullopt}), kExitConfigError);
  EXPECT_EQ(cmd_servo({dir_ / "missing.cfg", dir_ / "x.csv", std::nullopt}), kExitConfigError);
  EXPECT_FALSE(fs::exists(dir_ / "x.csv"));
}

TEST_F(CommandsTest, ServoAbortExitsTwoAndKeepsPartialLog) {
  std::string text = short_run_config();
  // Start exactly at the goal with the z-generator Jacobian.
  const std::string start = "x = 0.11\ny = 0.005\nz = 0.9\nb = 8\nc = 27";
  text.replace(text.find(start), start.size(), "x = 0\ny = 0.15\nz = 0.6\nb = 0\nc = 0");
  const std::string variant = "jacobian_variant = corrected";
  text.replace(text.find(variant), variant.size(), "jacobian_variant = as_printed");
  const fs::path out = dir_ / "abort.csv";
  EXPECT_EQ(cmd_servo({write("abort.cfg", text), out, std::nullopt}), kExitNumericalAbort);
  const std::string csv = slurp(out);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1012);
}

TEST_F(CommandsTest, ScanWritesCsvAndSummary) {
  const fs::path out = dir_ / "scan.csv";
  ASSERT_EQ(cmd_scan({kConfigDir / "paper_scan.cfg", out}), kExitOk);
  const std::string csv = slurp(out);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 145);
  EXPECT_EQ(summary_path_for(out), dir_ / "scan.summary.txt");
  const std::string summary = slurp(dir_ / "scan.summary.txt");
  EXPECT_NE(summary.find("viewpoints: 144"), std::string::npos);
}

TEST_F(CommandsTest, ScanBadGridExitsOne) {
  const fs::path cfg = write("bad.cfg", "[grid]\nd_min = 1\nd_max = 0\nd_step = 0.1\n");
  EXPECT_EQ(cmd_scan({cfg, dir_ / "s.csv"}), kExitConfigError);
}

TEST(CheckJacobian, CorrectedPasses) {
  std::ostringstream os;
  EXPECT_EQ(cmd_check_jacobian({JacobianVariant::kCorrected, 1000, 0}, os), kExitOk);
  EXPECT_NE(os.str().find("PASS"), std::string::npos);
}

TEST(CheckJacobian, AsPrintedReportsNearSingular) {
  std::ostringstream os;
  cmd_check_jacobian({JacobianVariant::kAsPrinted, 100, 0}, os);
  EXPECT_NE(os.str().find("near-singular"), std::string::npos);
  EXPECT_NE(os.str().find("trial 0:"), std::string::npos);
}

TEST(CheckJacobian, ZeroTrialsIsVacuous) {
  std::ostringstream os;
  EXPECT_EQ(cmd_check_jacobian({JacobianVariant::kCorrected, 0, 0}, os), kExitOk);
  EXPECT_NE(os.str().find("vacuous"), std::string::npos);
}

TEST_F(CommandsTest, BinaryExitCodes) {
  EXPECT_EQ(run_tool("check-jacobian --trials 200"), 0);
  EXPECT_EQ(run_tool("check-jacobian --trials 0"), 0);
  EXPECT_EQ(run_tool("check-jacobian --variant sideways"), 1);
  EXPECT_EQ(run_tool("servo --config \"" + (dir_ / "nope.cfg").string() + "\" --out x.csv"), 1);
  EXPECT_EQ(run_tool("frobnicate"), 1);
  const fs::path out = dir_ / "scan.csv";
  EXPECT_EQ(run_tool("scan --config \"" + (kConfigDir / "paper_scan.cfg").string() + "\" --out \"" +
                     out.string() + "\""),
            0);
  EXPECT_TRUE(fs::exists(dir_ / "scan.summary.txt"));
}

TEST_F(CommandsTest, BinaryServoMatchesLibrary) {
  const fs::path cfg = write("run.cfg", short_run_config("sigma_t = 0.001"));
  ASSERT_EQ(run_tool("servo --config \"" + cfg.string() + "\" --out \"" + (dir_ / "bin.csv").string() +
                     "\" --seed 5"),
            0);
  ASSERT_EQ(cmd_servo({cfg, dir_ / "lib.csv", 5}), kExitOk);
  EXPECT_EQ(slurp(dir_ / "bin.csv"), slurp(dir_ / "lib.csv"));
}

}  // namespace
}  // namespace servokit::cli
