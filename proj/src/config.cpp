#include "servokit/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "number_format.hpp"
#include "servokit/errors.hpp"

namespace servokit {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Parsed `section.key = value` entries, consumed by typed getters. Whatever
// is left unconsumed at the end is an unknown key.
class KeyValueReader {
 public:
  KeyValueReader(std::string_view text, std::initializer_list<std::string_view> sections) {
    std::string section;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto end = text.find('\n', pos);
      std::string_view line = text.substr(pos, end == std::string_view::npos ? text.size() - pos : end - pos);
      pos = (end == std::string_view::npos) ? text.size() + 1 : end + 1;
      ++line_no;

      if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;

      if (line.front() == '[') {
        if (line.back() != ']') throw ParseError("unterminated section header", line_no);
        section = std::string(trim(line.substr(1, line.size() - 2)));
        if (section.empty()) throw ParseError("empty section name", line_no);
        if (std::find(sections.begin(), sections.end(), section) == sections.end()) {
          throw ParseError("unknown section [" + section + "]", line_no);
        }
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_no);
      const std::string key(trim(line.substr(0, eq)));
      const std::string value(trim(line.substr(eq + 1)));
      if (key.empty()) throw ParseError("missing key before '='", line_no);
      if (value.empty()) throw ParseError("missing value for '" + key + "'", line_no);
      if (section.empty()) throw ParseError("key '" + key + "' outside of any [section]", line_no);
      const std::string full = section + "." + key;
      if (entries_.contains(full)) throw ParseError("duplicate key '" + full + "'", line_no);
      entries_.emplace(full, Entry{value, line_no});
    }
  }

  std::optional<double> real(const std::string& key) {
    auto e = take(key);
    if (!e) return std::nullopt;
    double v = 0.0;
    const char* first = e->value.data();
    const char* last = first + e->value.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last || !std::isfinite(v)) {
      throw ParseError("'" + key + "' expects a finite number, got '" + e->value + "'", e->line);
    }
    return v;
  }

  double required_real(const std::string& key) {
    if (auto v = real(key)) return *v;
    throw ValidationError("missing required key '" + key + "'");
  }

  template <typename Int>
  std::optional<Int> integer(const std::string& key) {
    auto e = take(key);
    if (!e) return std::nullopt;
    Int v{};
    const char* first = e->value.data();
    const char* last = first + e->value.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) {
      throw ParseError("'" + key + "' expects an integer, got '" + e->value + "'", e->line);
    }
    return v;
  }

  std::optional<std::string> text(const std::string& key) {
    auto e = take(key);
    if (!e) return std::nullopt;
    return e->value;
  }

  std::size_t line_of(const std::string& key) const {
    auto it = lines_.find(key);
    return it == lines_.end() ? 0 : it->second;
  }

  void reject_unknown() const {
    if (entries_.empty()) return;
    // Report the earliest offending line.
    auto first = entries_.begin();
    for (auto it = entries_.begin(); it != entries_.end(); ++it) {
      if (it->second.line < first->second.line) first = it;
    }
    throw ParseError("unknown key '" + first->first + "'", first->second.line);
  }

 private:
  struct Entry {
    std::string value;
    std::size_t line;
  };

  std::optional<Entry> take(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    Entry e = std::move(it->second);
    entries_.erase(it);
    lines_[key] = e.line;
    return e;
  }

  std::map<std::string, Entry> entries_;
  std::map<std::string, std::size_t> lines_;
};

RigidPose read_pose(KeyValueReader& r, const std::string& section, bool required) {
  auto get = [&](const char* k) {
    const std::string key = section + "." + k;
    return required ? r.required_real(key) : r.real(key).value_or(0.0);
  };
  const double x = get("x"), y = get("y"), z = get("z");
  const double a = r.real(section + ".a").value_or(0.0);
  const double b = get("b"), c = get("c");
  return RigidPose::from_xyzabc(x, y, z, deg2rad(a), deg2rad(b), deg2rad(c));
}

AxisRange read_axis(KeyValueReader& r, const std::string& name, double scale) {
  AxisRange a;
  a.min = r.required_real("grid." + name + "_min") * scale;
  a.max = r.required_real("grid." + name + "_max") * scale;
  a.step = r.required_real("grid." + name + "_step") * scale;
  return a;
}

std::string read_whole_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open config file '" + path.string() + "'", 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void put_kv(std::ostream& os, const char* key, double v) {
  os << key << " = ";
  detail::put_number(os, v);
  os << '\n';
}

void put_pose(std::ostream& os, const char* section, const RigidPose& p) {
  const EulerZYX e = p.euler();
  os << '[' << section << "]\n";
  put_kv(os, "x", p.translation().x());
  put_kv(os, "y", p.translation().y());
  put_kv(os, "z", p.translation().z());
  put_kv(os, "a", rad2deg(e.a));
  put_kv(os, "b", rad2deg(e.b));
  put_kv(os, "c", rad2deg(e.c));
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(a)); }

bool close(const RigidPose& a, const RigidPose& b, double tol) {
  return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace

void RunConfig::validate() const {
  goal.validate();
  limits.validate();
  sensor.validate();
  if (!(std::isfinite(servo_start) && servo_start >= 0.0)) {
    throw ValidationError("run.servo_start must be >= 0");
  }
  if (!(std::isfinite(duration) && duration > servo_start)) {
    throw ValidationError("run.duration must exceed run.servo_start");
  }
  if (duration > kMaxDuration) throw ValidationError("run.duration must be <= 1e4 s");
}

WorldState RunConfig::initial_state() const {
  WorldState s;
  s.hole_in_world = RigidPose::identity();
  s.flange_in_world = initial_hole_in_flange.inverse();
  s.t = 0.0;
  return s;
}

LoopOptions RunConfig::loop_options() const {
  LoopOptions o;
  o.duration = duration;
  o.servo_start = servo_start;
  o.variant = variant;
  return o;
}

RunConfig parse_config(std::string_view text) {
  KeyValueReader r(text, {"goal", "initial", "limits", "sensor", "hand_eye", "run"});
  RunConfig cfg;

  cfg.goal.desired_hole_in_flange = read_pose(r, "goal", true);
  cfg.goal.axis_offset = r.real("goal.axis_offset").value_or(cfg.goal.axis_offset);
  cfg.initial_hole_in_flange = read_pose(r, "initial", true);

  cfg.limits.v_max = r.required_real("limits.v_max");
  cfg.limits.w_max = deg2rad(r.required_real("limits.w_max"));
  cfg.limits.period = r.required_real("limits.period");
  cfg.limits.gain_translation = r.required_real("limits.gain_translation");
  cfg.limits.gain_rotation = r.required_real("limits.gain_rotation");
  cfg.limits.deadband = r.real("limits.deadband").value_or(cfg.limits.deadband);
  cfg.limits.cond_max = r.real("limits.cond_max").value_or(cfg.limits.cond_max);

  cfg.sensor.hand_eye = read_pose(r, "hand_eye", false);
  cfg.sensor.sigma_t = r.real("sensor.sigma_t").value_or(0.0);
  cfg.sensor.sigma_r = deg2rad(r.real("sensor.sigma_r").value_or(0.0));
  cfg.sensor.latency_steps = r.integer<int>("sensor.latency_steps").value_or(0);
  cfg.sensor.dropout_prob = r.real("sensor.dropout_prob").value_or(0.0);
  cfg.sensor.seed = r.integer<std::uint64_t>("sensor.seed").value_or(0);

  cfg.duration = r.required_real("run.duration");
  cfg.servo_start = r.required_real("run.servo_start");
  if (auto v = r.text("run.jacobian_variant")) {
    try {
      cfg.variant = parse_jacobian_variant(*v);
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), r.line_of("run.jacobian_variant"));
    }
  }
  cfg.output = r.text("run.output").value_or("");

  r.reject_unknown();
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) { return parse_config(read_whole_file(path)); }

std::string format_config(const RunConfig& cfg) {
  std::ostringstream os;
  put_pose(os, "goal", cfg.goal.desired_hole_in_flange);
  put_kv(os, "axis_offset", cfg.goal.axis_offset);
  os << '\n';
  put_pose(os, "initial", cfg.initial_hole_in_flange);
  os << "\n[limits]\n";
  put_kv(os, "v_max", cfg.limits.v_max);
  put_kv(os, "w_max", rad2deg(cfg.limits.w_max));
  put_kv(os, "period", cfg.limits.period);
  put_kv(os, "gain_translation", cfg.limits.gain_translation);
  put_kv(os, "gain_rotation", cfg.limits.gain_rotation);
  put_kv(os, "deadband", cfg.limits.deadband);
  put_kv(os, "cond_max", cfg.limits.cond_max);
  os << "\n[sensor]\n";
  put_kv(os, "sigma_t", cfg.sensor.sigma_t);
  put_kv(os, "sigma_r", rad2deg(cfg.sensor.sigma_r));
  os << "latency_steps = " << cfg.sensor.latency_steps << '\n';
  put_kv(os, "dropout_prob", cfg.sensor.dropout_prob);
  os << "seed = " << cfg.sensor.seed << "\n\n";
  put_pose(os, "hand_eye", cfg.sensor.hand_eye);
  os << "\n[run]\n";
  put_kv(os, "duration", cfg.duration);
  put_kv(os, "servo_start", cfg.servo_start);
  os << "jacobian_variant = " << to_string(cfg.variant) << '\n';
  if (!cfg.output.empty()) os << "output = " << cfg.output << '\n';
  return os.str();
}

bool approx_equal(const RunConfig& a, const RunConfig& b, double tol) {
  return close(a.goal.desired_hole_in_flange, b.goal.desired_hole_in_flange, tol) &&
         close(a.goal.axis_offset, b.goal.axis_offset, tol) &&
         close(a.initial_hole_in_flange, b.initial_hole_in_flange, tol) &&
         close(a.limits.v_max, b.limits.v_max, tol) && close(a.limits.w_max, b.limits.w_max, tol) &&
         close(a.limits.period, b.limits.period, tol) &&
         close(a.limits.gain_translation, b.limits.gain_translation, tol) &&
         close(a.limits.gain_rotation, b.limits.gain_rotation, tol) &&
         close(a.limits.deadband, b.limits.deadband, tol) &&
         close(a.limits.cond_max, b.limits.cond_max, tol) &&
         close(a.sensor.hand_eye, b.sensor.hand_eye, tol) && close(a.sensor.sigma_t, b.sensor.sigma_t, tol) &&
         close(a.sensor.sigma_r, b.sensor.sigma_r, tol) && a.sensor.latency_steps == b.sensor.latency_steps &&
         close(a.sensor.dropout_prob, b.sensor.dropout_prob, tol) && a.sensor.seed == b.sensor.seed &&
         close(a.duration, b.duration, tol) && close(a.servo_start, b.servo_start, tol) &&
         a.variant == b.variant && a.output == b.output;
}

void ScanConfig::validate() const {
  grid.validate();
  oracle.validate();
}

ScanConfig parse_scan_config(std::string_view text) {
  KeyValueReader r(text, {"grid", "oracle", "hole", "run"});
  ScanConfig cfg;
  cfg.grid.d = read_axis(r, "d", 1.0);
  cfg.grid.l = read_axis(r, "l", 1.0);
  cfg.grid.theta = read_axis(r, "theta", deg2rad(1.0));
  cfg.grid.phi = read_axis(r, "phi", deg2rad(1.0));

  DetectOracle& o = cfg.oracle;
  o.range_min = r.real("oracle.range_min").value_or(o.range_min);
  o.range_max = r.real("oracle.range_max").value_or(o.range_max);
  if (auto v = r.real("oracle.fov_half_h")) o.fov_half_h = deg2rad(*v);
  if (auto v = r.real("oracle.fov_half_v")) o.fov_half_v = deg2rad(*v);
  if (auto v = r.real("oracle.incidence_max")) o.incidence_max = deg2rad(*v);

  cfg.hole_in_world = read_pose(r, "hole", false);
  cfg.output = r.text("run.output").value_or("");

  r.reject_unknown();
  cfg.validate();
  return cfg;
}

ScanConfig load_scan_config(const std::filesystem::path& path) {
  return parse_scan_config(read_whole_file(path));
}

std::string format_scan_config(const ScanConfig& cfg) {
  std::ostringstream os;
  os << "[grid]\n";
  auto axis = [&os](const char* name, const AxisRange& a, double scale) {
    const std::string n(name);
    put_kv(os, (n + "_min").c_str(), a.min * scale);
    put_kv(os, (n + "_max").c_str(), a.max * scale);
    put_kv(os, (n + "_step").c_str(), a.step * scale);
  };
  axis("d", cfg.grid.d, 1.0);
  axis("l", cfg.grid.l, 1.0);
  axis("theta", cfg.grid.theta, rad2deg(1.0));
  axis("phi", cfg.grid.phi, rad2deg(1.0));
  os << "\n[oracle]\n";
  put_kv(os, "range_min", cfg.oracle.range_min);
  put_kv(os, "range_max", cfg.oracle.range_max);
  put_kv(os, "fov_half_h", rad2deg(cfg.oracle.fov_half_h));
  put_kv(os, "fov_half_v", rad2deg(cfg.oracle.fov_half_v));
  put_kv(os, "incidence_max", rad2deg(cfg.oracle.incidence_max));
  os << '\n';
  put_pose(os, "hole", cfg.hole_in_world);
  if (!cfg.output.empty()) os << "\n[run]\noutput = " << cfg.output << '\n';
  return os.str();
}

}  // namespace servokit
