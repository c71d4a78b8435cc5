#pragma once

#include <array>
#include <string>
#include <vector>

#include "vortexgrip/aero.hpp"

namespace vortexgrip {

/// Trend statistics of the simulator that the fitted constants must match.
enum class Trend {
  PressureGain,        // G1 flat, mean F_max gain per 100 kPa step (N)
  NozzleGain,          // 200 kPa flat, mean F_max gain per 0.2 mm nozzle step (N)
  DomeConcaveDrop,     // relative F_max drop from r = 20 to r = 15 mm, all grippers and pressures
  CylinderConvexDrop,  // G1 relative F_max drop from r = 100 to r = 15 mm, all pressures
  DomeConvexGain,      // G1 relative F_max gain over flat for r = 30..45 mm, all pressures
  PeakForce,           // G3 400 kPa, highest F_max over the 41 surfaces (N)
};

inline constexpr std::size_t kTrendCount = 6;

std::string_view to_string(Trend trend);

struct TrendTarget {
  Trend trend;
  double value;
};

/// Target values for the five shape trends and the peak force.
std::vector<TrendTarget> reference_trend_targets();

using TrendValues = std::array<double, kTrendCount>;

struct TrendOptions {
  LiftCurveOptions curve{};
  unsigned threads = 0;
};

TrendValues compute_trends(const AirModel& air, const AeroConstants& constants, const TrendOptions& options = {});

/// Box bounds on (swirl efficiency, gap sensitivity, attenuation length,
/// asymmetry penalty).
struct CalibrationBounds {
  std::array<double, 4> lower{0.2, 0.1, 0.01, 0.0};
  std::array<double, 4> upper{1.0, 10.0, 5.0, 0.9};

  void validate() const;
};

std::array<double, 4> calibrated_parameters(const AeroConstants& constants);
AeroConstants with_parameters(AeroConstants base, const std::array<double, 4>& params);
const std::array<std::string, 4>& calibrated_parameter_names();

struct CalibrationOptions {
  TrendOptions trends{};
  int max_iterations = 30;
  double tolerance = 1e-10;  // on the residual sum of squares
  double step_tolerance = 1e-7;
  /// Stop once an accepted step lowers the cost by less than this fraction.
  double relative_gain_tolerance = 1e-4;
};

struct TargetResidual {
  Trend trend;
  double target = 0.0;
  double achieved = 0.0;
  double residual = 0.0;  // (achieved - target) / target, signed
};

struct CalibrationResult {
  AeroConstants constants;
  std::vector<TargetResidual> residuals;
  double cost = 0.0;  // sum of squared relative residuals
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

/// Bounded Levenberg-Marquardt over the four calibrated constants, started
/// from `start`. Returns the best point found; `converged` is false when the
/// iteration limit is reached first.
CalibrationResult calibrate(const std::vector<TrendTarget>& targets, const CalibrationBounds& bounds,
                            const AirModel& air, const AeroConstants& start, const CalibrationOptions& options = {});

}  // namespace vortexgrip
