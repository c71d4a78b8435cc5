#pragma once

#include <string>
#include <string_view>

namespace vortexgrip {

/// Exponential shrinkage fit k_d = a * exp(-b * d_cad) for a resin printed
/// with the nozzle axis at 90 degrees to the platform.
struct ResinMaterial {
  std::string name;
  double coefficient_a = 0.0;
  double coefficient_b = 0.0;  // 1/mm
  double valid_min = 0.4;      // mm
  double valid_max = 1.2;      // mm

  static ResinMaterial grey();
  static ResinMaterial transparent();
  static ResinMaterial by_name(std::string_view name);
};

struct CompensationResult {
  std::string material;
  double target_printed = 0.0;  // mm
  double cad_diameter = 0.0;    // mm
  double shrinkage = 0.0;
  int iterations = 0;
  /// Grey resin clogs small channels; targets below 0.55 mm are flagged.
  bool printability_warning = false;
};

inline constexpr double kPrintabilityLimit = 0.55;  // mm

double shrinkage_coefficient(const ResinMaterial& material, double cad_diameter);
double printed_diameter(const ResinMaterial& material, double cad_diameter);

/// Bisection inverse of printed_diameter on the calibrated range.
CompensationResult compensate(const ResinMaterial& material, double target_printed, double tolerance = 1e-6);

}  // namespace vortexgrip
