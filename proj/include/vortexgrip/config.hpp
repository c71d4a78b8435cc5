#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "vortexgrip/aero.hpp"
#include "vortexgrip/calibration.hpp"
#include "vortexgrip/ensemble.hpp"
#include "vortexgrip/geometry.hpp"
#include "vortexgrip/protocol.hpp"

namespace vortexgrip {

/// One `key = value` line of a config file.
struct ConfigEntry {
  std::string key;
  std::string value;
  int line = 0;
};

/// Parses `key = value` lines; '#' starts a comment. Keys are dotted names.
std::vector<ConfigEntry> parse_key_values(const std::string& text);

struct Config {
  AirModel air{};
  AeroConstants aero{};
  GridSpec grid{};
  int curve_samples = 201;
  double curve_h_max = 10.0;  // mm

  double noise_sd = 0.05;
  double stiffness = 0.5;  // N/mm
  double ascent_velocity = 0.01;
  double ascent_acceleration = 0.01;
  FrictionElementSpec friction{};

  SurrogateParams surrogate{};
  int cv_folds = 5;

  GridSpec calibration_grid{24, 48};
  int calibration_samples = 81;
  int calibration_max_iterations = 30;
  CalibrationBounds calibration_bounds{};

  std::uint64_t seed = 42;

  void validate() const;
  LiftCurveOptions curve_options() const;
  ProtocolSettings protocol_settings() const;
  TrendOptions calibration_trend_options(unsigned threads) const;
};

/// Applies entries over the defaults; unknown keys and bad values raise
/// ConfigError naming the line.
Config config_from_entries(const std::vector<ConfigEntry>& entries, Config base = {});
Config load_config(const std::filesystem::path& path);
Config parse_config(const std::string& text);
/// Every key with its current value, in a stable order; parse_config of the
/// result reproduces the config.
std::string config_to_text(const Config& config);

/// `gripper.*` keys: a preset plus per-field overrides.
GripperGeometry gripper_from_entries(const std::vector<ConfigEntry>& entries);
/// `surface.*` keys.
SurfaceSpec surface_from_entries(const std::vector<ConfigEntry>& entries, double default_stiffness);

/// `plan.*` keys: grippers, pressures, surfaces ("reference" or family:radius
/// list) and repetitions. Missing keys fall back to the reference plan.
FactorialPlan plan_from_entries(const std::vector<ConfigEntry>& entries, double stiffness);

std::string format_double(double value);

}  // namespace vortexgrip
