#include "vortexgrip/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "vortexgrip/error.hpp"
#include "vortexgrip/parallel.hpp"
#include "vortexgrip/random.hpp"

namespace vortexgrip {

namespace {

std::uint64_t hash_text(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) h = mix64(h ^ c);
  return h;
}

// Time to travel a distance (mm) from rest with a trapezoidal velocity
// profile capped at the ascent velocity.
double ascent_time(double distance, double velocity, double acceleration) {
  const double ramp = velocity * velocity / (2.0 * acceleration);
  if (distance <= ramp) return std::sqrt(2.0 * distance / acceleration);
  return velocity / acceleration + (distance - ramp) / velocity;
}

}  // namespace

const std::vector<double>& reference_radii() {
  static const std::vector<double> radii{15, 20, 25, 30, 35, 40, 45, 50, 75, 100};
  return radii;
}

const std::vector<double>& reference_pressures() {
  static const std::vector<double> pressures{100, 200, 300, 400};
  return pressures;
}

std::vector<SurfaceSpec> reference_surfaces(double stiffness) {
  std::vector<SurfaceSpec> out{SurfaceSpec::flat(stiffness)};
  for (auto family : {SurfaceFamily::DomeConvex, SurfaceFamily::CylinderConvex, SurfaceFamily::DomeConcave,
                      SurfaceFamily::CylinderConcave}) {
    for (double r : reference_radii()) out.push_back({family, r, stiffness});
  }
  return out;
}

FactorialPlan reference_plan(double stiffness) {
  FactorialPlan plan;
  for (const auto& id : preset_gripper_ids()) plan.grippers.push_back({id, preset_gripper(id)});
  plan.pressures = reference_pressures();
  plan.surfaces = reference_surfaces(stiffness);
  plan.repetitions = 10;
  return plan;
}

std::uint64_t record_seed(std::uint64_t master_seed, const ExperimentCondition& c) {
  return stable_hash({master_seed, hash_text(c.gripper_id), double_bits(c.gripper.nozzle_diameter),
                      double_bits(c.pressure), static_cast<std::uint64_t>(c.surface.family),
                      double_bits(c.surface.radius), static_cast<std::uint64_t>(c.repetition)});
}

ExperimentRecord record_from_curve(const ExperimentCondition& condition, const LiftCurve& curve, double noise_sd,
                                   std::uint64_t seed, const ProtocolSettings& settings) {
  if (!(noise_sd >= 0.0)) throw InvalidArgument("noise standard deviation must be non-negative");
  if (!(settings.ascent_velocity > 0.0 && settings.ascent_acceleration > 0.0))
    throw InvalidArgument("ascent velocity and acceleration must be positive");
  ExperimentRecord rec;
  rec.condition = condition;
  rec.seed = seed;
  rec.trace.ascent_velocity = settings.ascent_velocity;
  rec.trace.ascent_acceleration = settings.ascent_acceleration;

  Rng rng(seed);
  const double factor = std::max(0.0, 1.0 + noise_sd * rng.normal());
  const double v = settings.ascent_velocity * 1e3;       // mm/s
  const double a = settings.ascent_acceleration * 1e3;   // mm/s^2
  const double k = condition.surface.stiffness;          // N/mm
  const auto& s = curve.samples;
  if (s.empty()) return rec;

  // The ascent starts where the suction first balances the overpressure
  // (F_z = 0). If the surface is already attracted at the lowest standoff it
  // lifts right away and the trace begins after a short settle.
  std::size_t first = 0;
  double t0 = 0.0;
  TraceSample start{0.0, 0.0, 0.0};
  double start_standoff = s.front().height;
  if (s.front().force < 0.0) {
    std::size_t i = 1;
    while (i < s.size() && s[i].force < 0.0) ++i;
    if (i == s.size()) {
      rec.trace.samples.push_back(start);
      return rec;
    }
    const double f0 = s[i - 1].force;
    const double f1 = s[i].force;
    start_standoff = s[i - 1].height + (s[i].height - s[i - 1].height) * (-f0) / (f1 - f0);
    first = i;
  } else {
    t0 = settings.settle_time;
    first = s.front().force > 0.0 ? 0 : 1;
  }
  rec.trace.samples.push_back(start);

  // Gripper height: standoff plus the tissue's elastic stretch under lift.
  double last_height = 0.0;
  for (std::size_t i = first; i < s.size(); ++i) {
    const double height = s[i].height + s[i].force / k - start_standoff;
    if (!(height > last_height)) continue;
    last_height = height;
    const double force = s[i].force * factor;
    rec.trace.samples.push_back({t0 + ascent_time(height, v, a), height, force});
    if (force > rec.max_lift) {
      rec.max_lift = force;
      rec.h_opt = s[i].height;
    }
  }
  if (!settings.keep_traces) rec.trace.samples.clear();
  return rec;
}

ExperimentRecord run_protocol(const ExperimentCondition& condition, double noise_sd, std::uint64_t seed,
                              const ProtocolSettings& settings) {
  const LiftCurve curve = lift_curve(condition.gripper, condition.surface, condition.pressure, settings.air,
                                     settings.constants, settings.curve);
  return record_from_curve(condition, curve, noise_sd, seed, settings);
}

Dataset generate_dataset(const FactorialPlan& plan, double noise_sd, std::uint64_t master_seed,
                         const ProtocolSettings& settings, unsigned threads) {
  if (plan.size() == 0) throw InvalidArgument("factorial plan is empty");
  Dataset ds;
  ds.records.resize(plan.size());
  const std::size_t n_p = plan.pressures.size();
  const std::size_t n_s = plan.surfaces.size();
  const std::size_t reps = static_cast<std::size_t>(plan.repetitions);
  const std::size_t curves = plan.grippers.size() * n_p * n_s;

  // One lift curve per (gripper, pressure, surface), shared by its repetitions.
  parallel_for(curves, threads, [&](std::size_t c) {
    const auto& g = plan.grippers[c / (n_p * n_s)];
    const double pressure = plan.pressures[(c / n_s) % n_p];
    const SurfaceSpec& surface = plan.surfaces[c % n_s];
    const LiftCurve curve = lift_curve(g.geometry, surface, pressure, settings.air, settings.constants, settings.curve);
    for (std::size_t r = 0; r < reps; ++r) {
      ExperimentCondition cond{g.id, g.geometry, pressure, surface, static_cast<int>(r)};
      const std::uint64_t seed = record_seed(master_seed, cond);
      ds.records[c * reps + r] = record_from_curve(cond, curve, noise_sd, seed, settings);
    }
  });
  return ds;
}

Dataset augment(const Dataset& dataset) {
  Dataset out = dataset;
  std::map<std::tuple<std::string, int, double>, bool> seen;
  for (const auto& rec : dataset.records) {
    const auto key = std::make_tuple(rec.condition.gripper_id, static_cast<int>(rec.condition.surface.family),
                                     rec.condition.surface.radius);
    if (seen.emplace(key, true).second) {
      ExperimentRecord zero;
      zero.condition = rec.condition;
      zero.condition.pressure = 0.0;
      zero.condition.repetition = 0;
      zero.trace.ascent_velocity = rec.trace.ascent_velocity;
      zero.trace.ascent_acceleration = rec.trace.ascent_acceleration;
      out.records.push_back(std::move(zero));
    }
  }
  return out;
}

}  // namespace vortexgrip
