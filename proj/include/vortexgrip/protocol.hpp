#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vortexgrip/aero.hpp"
#include "vortexgrip/geometry.hpp"

namespace vortexgrip {

struct ExperimentCondition {
  std::string gripper_id;
  GripperGeometry gripper;
  double pressure = 0.0;  // kPa gauge
  SurfaceSpec surface;
  int repetition = 0;
};

struct TraceSample {
  double time = 0.0;    // s
  double height = 0.0;  // mm, gripper height above the ascent start
  double force = 0.0;   // N
};

struct ForceTrace {
  std::vector<TraceSample> samples;
  double ascent_velocity = 0.01;      // m/s
  double ascent_acceleration = 0.01;  // m/s^2
};

struct ExperimentRecord {
  ExperimentCondition condition;
  ForceTrace trace;
  double max_lift = 0.0;  // N
  double h_opt = 0.0;     // mm, surface standoff at the peak
  std::uint64_t seed = 0;
};

enum class Provenance { Synthetic, External };

struct Dataset {
  std::vector<ExperimentRecord> records;
  int schema_version = 1;
  Provenance provenance = Provenance::Synthetic;
};

/// Everything the simulated rig needs besides the condition itself.
struct ProtocolSettings {
  AirModel air{};
  AeroConstants constants{};
  LiftCurveOptions curve{};
  double ascent_velocity = 0.01;      // m/s
  double ascent_acceleration = 0.01;  // m/s^2
  double settle_time = 0.01;          // s, used when the surface lifts immediately
  bool keep_traces = true;
};

struct FactorialPlan {
  struct Gripper {
    std::string id;
    GripperGeometry geometry;
  };
  std::vector<Gripper> grippers;
  std::vector<double> pressures;
  std::vector<SurfaceSpec> surfaces;
  int repetitions = 10;

  std::size_t size() const { return grippers.size() * pressures.size() * surfaces.size() * repetitions; }
};

/// G1-G3 x {100..400 kPa} x 41 surfaces x 10 repetitions.
FactorialPlan reference_plan(double stiffness = 0.5);
/// Flat plus each curved family at the ten radii 15-50, 75, 100 mm.
std::vector<SurfaceSpec> reference_surfaces(double stiffness = 0.5);
const std::vector<double>& reference_radii();
const std::vector<double>& reference_pressures();

std::uint64_t record_seed(std::uint64_t master_seed, const ExperimentCondition& condition);

/// Reparameterizes a lift curve as a timed ascent and applies repeat noise.
ExperimentRecord record_from_curve(const ExperimentCondition& condition, const LiftCurve& curve, double noise_sd,
                                   std::uint64_t seed, const ProtocolSettings& settings = {});

ExperimentRecord run_protocol(const ExperimentCondition& condition, double noise_sd, std::uint64_t seed,
                              const ProtocolSettings& settings = {});

/// Records come out in canonical order (gripper, pressure, surface,
/// repetition) regardless of the worker count.
Dataset generate_dataset(const FactorialPlan& plan, double noise_sd, std::uint64_t master_seed,
                         const ProtocolSettings& settings = {}, unsigned threads = 0);

/// Appends one zero-pressure, zero-force row per distinct (gripper, surface).
Dataset augment(const Dataset& dataset);

}  // namespace vortexgrip
