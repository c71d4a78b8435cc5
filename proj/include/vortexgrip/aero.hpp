#pragma once

#include <cstddef>
#include <vector>

#include "vortexgrip/geometry.hpp"

namespace vortexgrip {

struct AirModel {
  double density = 1.204;            // kg/m^3, ambient
  double ambient_pressure = 101.325; // kPa absolute
  double gamma = 1.4;
  double gas_constant = 287.05;      // J/(kg K)
  double temperature = 293.15;       // K, supply stagnation temperature

  void validate() const;
};

/// Closure constants of the reduced-order flow model. The first four are the
/// calibrated set; the rest are fixed structural constants.
struct AeroConstants {
  double swirl_efficiency = 0.998;
  double gap_sensitivity = 2.0832;
  double attenuation_length = 0.01;     // mm, reference part of the attenuation length
  double asymmetry_penalty = 0.0;
  double discharge_coefficient = 0.8;
  double wall_friction = 0.002;         // cavity wall drag coefficient
  double overpressure_coefficient = 13.0;
  double flow_length_scale = 8.0;       // mm of attenuation length per g/s of mass flow
  double confinement_length = 8.0;      // mm, standoff scale beyond which the swirl collapses

  void validate() const;
};

struct NozzleFlow {
  double pressure_ratio = 1.0;       // ambient / stagnation, absolute
  double exit_velocity = 0.0;        // m/s
  double jet_velocity = 0.0;         // m/s, fully expanded
  double mass_flow_per_nozzle = 0.0; // kg/s
  double total_mass_flow = 0.0;      // kg/s
  bool choked = false;
  double discharge_coefficient = 0.8;
};

struct VortexFlowState {
  double circumferential_velocity = 0.0;  // m/s
  double angular_velocity = 0.0;          // 1/s
  double effective_density = 0.0;         // kg/m^3
  double supply_pressure = 0.0;           // kPa gauge
  double total_mass_flow = 0.0;           // kg/s
  double attenuation_length = 0.0;        // mm
};

struct PressureField {
  std::vector<double> gauge;  // Pa, same sample layout as the gap field
  std::vector<double> area;   // m^2 per sample
  double suction_zone_area = 0.0;
  double overpressure_zone_area = 0.0;
};

struct LiftSample {
  double height = 0.0;  // mm
  double force = 0.0;   // N
};

struct LiftCurve {
  std::vector<LiftSample> samples;
  double f_max = 0.0;  // N
  double h_opt = 0.0;  // mm
};

struct LiftCurveOptions {
  double h_max = 10.0;  // mm
  int samples = 201;
  GridSpec grid{};
  /// Locate the peak between grid samples with a 1-D optimizer and insert it.
  bool refine_peak = true;
};

inline constexpr double kCriticalPressureRatioAir = 0.5282817877171742;

double critical_pressure_ratio(double gamma);

NozzleFlow nozzle_exit_state(const AirModel& air, double supply_kpa, const GripperGeometry& gripper,
                             const AeroConstants& constants = {});

/// Gap attenuation 1 / (1 + c_h * gap / length).
double gap_attenuation(double gap, double length, const AeroConstants& constants);

/// `standoff` is the closest approach of the surface; it only enters through
/// the confinement cutoff and may be left at zero for a closed cavity.
VortexFlowState swirl_state(const NozzleFlow& flow, const GripperGeometry& gripper, double mean_gap,
                            const AirModel& air, const AeroConstants& constants, double supply_kpa = 0.0,
                            double standoff = 0.0);

/// Closed-form forced-vortex lift 0.25 * rho * pi * omega^2 * (d_c/2)^4.
double lift_force_uniform(const VortexFlowState& state, const GripperGeometry& gripper, const AirModel& air);

PressureField pressure_field(const VortexFlowState& state, const GapField& field, const AirModel& air,
                             const AeroConstants& constants);

double net_lift(const PressureField& field);

/// Full pipeline at a single standoff, friction pads included.
double lift_at_standoff(const GripperGeometry& gripper, const SurfaceSpec& surface, double supply_kpa,
                        const AirModel& air, const AeroConstants& constants, double standoff,
                        const GridSpec& grid = {});

/// Reusable evaluator for one gripper/surface/pressure combination.
class LiftModel {
 public:
  LiftModel(const GripperGeometry& gripper, const SurfaceSpec& surface, double supply_kpa, const AirModel& air,
            const AeroConstants& constants, const GridSpec& grid = {});

  /// Lift at a nominal standoff; applies the friction-pad clamp and factor.
  double lift(double standoff) const;
  double minimum_standoff() const;

 private:
  double raw_lift(double standoff) const;

  GripperGeometry gripper_;
  AirModel air_;
  AeroConstants constants_;
  double supply_kpa_;
  GapModel gaps_;
  NozzleFlow flow_;
};

LiftCurve lift_curve(const GripperGeometry& gripper, const SurfaceSpec& surface, double supply_kpa,
                     const AirModel& air, const AeroConstants& constants, const LiftCurveOptions& options = {});

}  // namespace vortexgrip
