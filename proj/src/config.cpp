#include "vortexgrip/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "vortexgrip/error.hpp"

namespace vortexgrip {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& v) {
  double d = 0.0;
  const auto* end = v.data() + v.size();
  const auto res = std::from_chars(v.data(), end, d);
  if (res.ec != std::errc() || res.ptr != end) throw ConfigError("expected a number, got '" + v + "'");
  return d;
}

long long parse_int(const std::string& v) {
  long long i = 0;
  const auto* end = v.data() + v.size();
  const auto res = std::from_chars(v.data(), end, i);
  if (res.ec != std::errc() || res.ptr != end) throw ConfigError("expected an integer, got '" + v + "'");
  return i;
}

int parse_int32(const std::string& v) {
  const long long i = parse_int(v);
  if (i < -2147483647LL || i > 2147483647LL) throw ConfigError("integer out of range: '" + v + "'");
  return static_cast<int>(i);
}

std::uint64_t parse_u64(const std::string& v) {
  std::uint64_t i = 0;
  const auto* end = v.data() + v.size();
  const auto res = std::from_chars(v.data(), end, i);
  if (res.ec != std::errc() || res.ptr != end) throw ConfigError("expected an unsigned integer, got '" + v + "'");
  return i;
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "on" || v == "1") return true;
  if (v == "false" || v == "off" || v == "0") return false;
  throw ConfigError("expected true/false, got '" + v + "'");
}

struct Field {
  const char* key;
  std::function<std::string(const Config&)> get;
  std::function<void(Config&, const std::string&)> set;
};

#define VG_DOUBLE(KEY, MEMBER)                                                   \
  Field {                                                                        \
    KEY, [](const Config& c) { return format_double(c.MEMBER); },                \
        [](Config& c, const std::string& v) { c.MEMBER = parse_double(v); }      \
  }
#define VG_INT(KEY, MEMBER)                                                      \
  Field {                                                                        \
    KEY, [](const Config& c) { return std::to_string(c.MEMBER); },               \
        [](Config& c, const std::string& v) { c.MEMBER = parse_int32(v); }       \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> f{
      VG_DOUBLE("air.density_kg_m3", air.density),
      VG_DOUBLE("air.ambient_pressure_kPa", air.ambient_pressure),
      VG_DOUBLE("air.gamma", air.gamma),
      VG_DOUBLE("air.gas_constant_J_kgK", air.gas_constant),
      VG_DOUBLE("air.temperature_K", air.temperature),
      VG_DOUBLE("aero.swirl_efficiency", aero.swirl_efficiency),
      VG_DOUBLE("aero.gap_sensitivity", aero.gap_sensitivity),
      VG_DOUBLE("aero.attenuation_length_mm", aero.attenuation_length),
      VG_DOUBLE("aero.asymmetry_penalty", aero.asymmetry_penalty),
      VG_DOUBLE("aero.discharge_coefficient", aero.discharge_coefficient),
      VG_DOUBLE("aero.wall_friction", aero.wall_friction),
      VG_DOUBLE("aero.overpressure_coefficient", aero.overpressure_coefficient),
      VG_DOUBLE("aero.flow_length_scale_mm_per_g_s", aero.flow_length_scale),
      VG_DOUBLE("aero.confinement_length_mm", aero.confinement_length),
      VG_INT("grid.radial", grid.radial),
      VG_INT("grid.angular", grid.angular),
      VG_INT("curve.samples", curve_samples),
      VG_DOUBLE("curve.h_max_mm", curve_h_max),
      VG_DOUBLE("protocol.noise_sd", noise_sd),
      VG_DOUBLE("protocol.stiffness_N_mm", stiffness),
      VG_DOUBLE("protocol.ascent_velocity_m_s", ascent_velocity),
      VG_DOUBLE("protocol.ascent_acceleration_m_s2", ascent_acceleration),
      VG_INT("friction.count", friction.count),
      VG_DOUBLE("friction.element_diameter_mm", friction.element_diameter),
      VG_DOUBLE("friction.element_height_mm", friction.element_height),
      VG_DOUBLE("friction.angular_spacing_deg", friction.angular_spacing),
      VG_DOUBLE("friction.lift_factor", friction.lift_factor),
      VG_INT("forest.trees", surrogate.forest.n_trees),
      VG_INT("forest.max_depth", surrogate.forest.max_depth),
      VG_INT("forest.min_samples_leaf", surrogate.forest.min_samples_leaf),
      VG_DOUBLE("forest.feature_fraction", surrogate.forest.feature_fraction),
      Field{"forest.bootstrap", [](const Config& c) { return std::string(c.surrogate.forest.bootstrap ? "true" : "false"); },
            [](Config& c, const std::string& v) { c.surrogate.forest.bootstrap = parse_bool(v); }},
      VG_INT("boost.stages", surrogate.boost.n_stages),
      VG_INT("boost.max_depth", surrogate.boost.max_depth),
      VG_INT("boost.min_samples_leaf", surrogate.boost.min_samples_leaf),
      Field{"boost.loss", [](const Config& c) { return std::string(to_string(c.surrogate.boost.loss)); },
            [](Config& c, const std::string& v) {
              try {
                c.surrogate.boost.loss = parse_boost_loss(v);
              } catch (const InvalidArgument& e) {
                throw ConfigError(e.what());
              }
            }},
      VG_INT("cv.folds", cv_folds),
      VG_INT("calibration.grid_radial", calibration_grid.radial),
      VG_INT("calibration.grid_angular", calibration_grid.angular),
      VG_INT("calibration.curve_samples", calibration_samples),
      VG_INT("calibration.max_iterations", calibration_max_iterations),
      VG_DOUBLE("calibration.lower.swirl_efficiency", calibration_bounds.lower[0]),
      VG_DOUBLE("calibration.upper.swirl_efficiency", calibration_bounds.upper[0]),
      VG_DOUBLE("calibration.lower.gap_sensitivity", calibration_bounds.lower[1]),
      VG_DOUBLE("calibration.upper.gap_sensitivity", calibration_bounds.upper[1]),
      VG_DOUBLE("calibration.lower.attenuation_length_mm", calibration_bounds.lower[2]),
      VG_DOUBLE("calibration.upper.attenuation_length_mm", calibration_bounds.upper[2]),
      VG_DOUBLE("calibration.lower.asymmetry_penalty", calibration_bounds.lower[3]),
      VG_DOUBLE("calibration.upper.asymmetry_penalty", calibration_bounds.upper[3]),
      Field{"seed", [](const Config& c) { return std::to_string(c.seed); },
            [](Config& c, const std::string& v) { c.seed = parse_u64(v); }},
  };
  return f;
}

#undef VG_DOUBLE
#undef VG_INT

std::string at_line(const ConfigEntry& e, const std::string& msg) {
  return "line " + std::to_string(e.line) + " (" + e.key + "): " + msg;
}

template <class F>
void with_line(const ConfigEntry& e, F&& f) {
  try {
    f();
  } catch (const ConfigError& err) {
    throw ConfigError(at_line(e, err.what()));
  } catch (const InvalidArgument& err) {
    throw ConfigError(at_line(e, err.what()));
  }
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::vector<ConfigEntry> parse_key_values(const std::string& text) {
  std::vector<ConfigEntry> out;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string content = trim(std::string_view(raw).substr(0, hash));
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line) + ": expected 'key = value'");
    ConfigEntry e{trim(std::string_view(content).substr(0, eq)), trim(std::string_view(content).substr(eq + 1)), line};
    if (e.key.empty()) throw ConfigError("line " + std::to_string(line) + ": empty key");
    out.push_back(std::move(e));
  }
  return out;
}

void Config::validate() const {
  try {
    air.validate();
    aero.validate();
    grid.validate();
    calibration_grid.validate();
    friction.validate();
    calibration_bounds.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (curve_samples < 16 || calibration_samples < 16) throw ConfigError("curve samples must be at least 16");
  if (!(curve_h_max > 0.0)) throw ConfigError("curve.h_max_mm must be positive");
  if (!(noise_sd >= 0.0 && noise_sd < 1.0)) throw ConfigError("protocol.noise_sd must lie in [0, 1)");
  if (!(stiffness > 0.0)) throw ConfigError("protocol.stiffness_N_mm must be positive");
  if (!(ascent_velocity > 0.0 && ascent_acceleration > 0.0)) throw ConfigError("ascent kinematics must be positive");
  const auto& fp = surrogate.forest;
  if (fp.n_trees < 1 || fp.max_depth < 0 || fp.min_samples_leaf < 1 || !(fp.feature_fraction > 0.0 && fp.feature_fraction <= 1.0))
    throw ConfigError("forest hyperparameters out of range");
  const auto& bp = surrogate.boost;
  if (bp.n_stages < 1 || bp.max_depth < 0 || bp.min_samples_leaf < 1) throw ConfigError("boost hyperparameters out of range");
  if (cv_folds < 2) throw ConfigError("cv.folds must be at least 2");
  if (calibration_max_iterations < 1) throw ConfigError("calibration.max_iterations must be positive");
}

LiftCurveOptions Config::curve_options() const {
  LiftCurveOptions o;
  o.h_max = curve_h_max;
  o.samples = curve_samples;
  o.grid = grid;
  return o;
}

ProtocolSettings Config::protocol_settings() const {
  ProtocolSettings s;
  s.air = air;
  s.constants = aero;
  s.curve = curve_options();
  s.ascent_velocity = ascent_velocity;
  s.ascent_acceleration = ascent_acceleration;
  return s;
}

TrendOptions Config::calibration_trend_options(unsigned threads) const {
  TrendOptions t;
  t.curve = curve_options();
  t.curve.grid = calibration_grid;
  t.curve.samples = calibration_samples;
  t.threads = threads;
  return t;
}

Config config_from_entries(const std::vector<ConfigEntry>& entries, Config base) {
  for (const auto& e : entries) {
    const auto dot = e.key.find('.');
    const std::string section = dot == std::string::npos ? "" : e.key.substr(0, dot);
    // Geometry and plan sections are read by their own loaders.
    if (section == "gripper" || section == "surface" || section == "plan") continue;
    bool found = false;
    for (const auto& f : fields()) {
      if (e.key == f.key) {
        with_line(e, [&] { f.set(base, e.value); });
        found = true;
        break;
      }
    }
    if (!found) throw ConfigError(at_line(e, "unknown key"));
  }
  base.validate();
  return base;
}

Config parse_config(const std::string& text) { return config_from_entries(parse_key_values(text)); }

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string config_to_text(const Config& config) {
  std::string out;
  for (const auto& f : fields()) out += std::string(f.key) + " = " + f.get(config) + "\n";
  return out;
}

GripperGeometry gripper_from_entries(const std::vector<ConfigEntry>& entries) {
  GripperGeometry g = preset_gripper("G1");
  for (const auto& e : entries) {
    if (e.key == "gripper.preset") with_line(e, [&] {
        const auto friction = g.friction_elements;
        g = preset_gripper(e.value);
        g.friction_elements = friction;
      });
  }
  for (const auto& e : entries) {
    if (e.key.rfind("gripper.", 0) != 0 || e.key == "gripper.preset") continue;
    with_line(e, [&] {
      if (e.key == "gripper.nozzle_diameter_mm") g.nozzle_diameter = parse_double(e.value);
      else if (e.key == "gripper.gripper_diameter_mm") g.gripper_diameter = parse_double(e.value);
      else if (e.key == "gripper.cavity_diameter_mm") g.cavity_diameter = parse_double(e.value);
      else if (e.key == "gripper.cavity_height_mm") g.cavity_height = parse_double(e.value);
      else if (e.key == "gripper.nozzle_count") g.nozzle_count = parse_int32(e.value);
      else if (e.key == "gripper.chamfer_radius_mm") g.chamfer_radius = parse_double(e.value);
      else if (e.key == "gripper.body_diameter_mm") g.body_diameter = parse_double(e.value);
      else if (e.key == "gripper.flange_height_mm") g.flange_height = parse_double(e.value);
      else if (e.key == "gripper.friction_elements") {
        if (parse_bool(e.value)) g.friction_elements = FrictionElementSpec{};
        else g.friction_elements.reset();
      } else throw ConfigError("unknown key");
    });
  }
  try {
    g.validate();
  } catch (const InvalidGeometry& err) {
    throw ConfigError(err.what());
  }
  return g;
}

SurfaceSpec surface_from_entries(const std::vector<ConfigEntry>& entries, double default_stiffness) {
  SurfaceSpec s = SurfaceSpec::flat(default_stiffness);
  bool radius_set = false;
  for (const auto& e : entries) {
    if (e.key.rfind("surface.", 0) != 0) continue;
    with_line(e, [&] {
      if (e.key == "surface.family") s.family = parse_surface_family(e.value);
      else if (e.key == "surface.radius_mm") {
        s.radius = parse_double(e.value);
        radius_set = true;
      } else if (e.key == "surface.stiffness_N_mm") s.stiffness = parse_double(e.value);
      else throw ConfigError("unknown key");
    });
  }
  if (s.family == SurfaceFamily::Flat) s.radius = kFlatRadius;
  if (s.family != SurfaceFamily::Flat && !radius_set) throw ConfigError("surface.radius_mm is required for curved surfaces");
  return s;
}

FactorialPlan plan_from_entries(const std::vector<ConfigEntry>& entries, double stiffness) {
  FactorialPlan plan = reference_plan(stiffness);
  for (const auto& e : entries) {
    if (e.key.rfind("plan.", 0) != 0) continue;
    with_line(e, [&] {
      if (e.key == "plan.grippers") {
        plan.grippers.clear();
        for (const auto& id : split_list(e.value)) plan.grippers.push_back({id, preset_gripper(id)});
      } else if (e.key == "plan.pressures_kPa") {
        plan.pressures.clear();
        for (const auto& p : split_list(e.value)) plan.pressures.push_back(parse_double(p));
      } else if (e.key == "plan.surfaces") {
        if (e.value == "reference") {
          plan.surfaces = reference_surfaces(stiffness);
          return;
        }
        plan.surfaces.clear();
        for (const auto& item : split_list(e.value)) {
          const auto colon = item.find(':');
          const SurfaceFamily fam = parse_surface_family(trim(item.substr(0, colon)));
          if (fam == SurfaceFamily::Flat) {
            plan.surfaces.push_back(SurfaceSpec::flat(stiffness));
          } else {
            if (colon == std::string::npos) throw ConfigError("curved surface '" + item + "' needs family:radius");
            plan.surfaces.push_back({fam, parse_double(trim(item.substr(colon + 1))), stiffness});
          }
        }
      } else if (e.key == "plan.repetitions") {
        plan.repetitions = parse_int32(e.value);
      } else {
        throw ConfigError("unknown key");
      }
    });
  }
  if (plan.grippers.empty() || plan.pressures.empty() || plan.surfaces.empty() || plan.repetitions < 1)
    throw ConfigError("plan must have at least one gripper, pressure, surface and repetition");
  return plan;
}

}  // namespace vortexgrip
