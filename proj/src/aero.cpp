#include "vortexgrip/aero.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/tools/minima.hpp>

#include "vortexgrip/error.hpp"

namespace vortexgrip {

namespace {

constexpr double kMm = 1e-3;
constexpr double kMinThroat = 1e-3;  // mm, keeps the channel resistances finite at contact

}  // namespace

void AirModel::validate() const {
  if (!(density > 0.0)) throw InvalidArgument("air density must be positive");
  if (!(gamma > 1.0)) throw InvalidArgument("ratio of specific heats must exceed 1");
  if (!(ambient_pressure > 0.0 && gas_constant > 0.0 && temperature > 0.0))
    throw InvalidArgument("ambient pressure, gas constant and temperature must be positive");
}

void AeroConstants::validate() const {
  if (!(swirl_efficiency > 0.0 && swirl_efficiency <= 1.0)) throw InvalidArgument("swirl efficiency must lie in (0, 1]");
  if (!(gap_sensitivity >= 0.0)) throw InvalidArgument("gap sensitivity must be non-negative");
  if (!(attenuation_length > 0.0)) throw InvalidArgument("attenuation length must be positive");
  if (!(asymmetry_penalty >= 0.0 && asymmetry_penalty <= 1.0))
    throw InvalidArgument("asymmetry penalty must lie in [0, 1]");
  if (!(discharge_coefficient > 0.0 && discharge_coefficient <= 1.0))
    throw InvalidArgument("discharge coefficient must lie in (0, 1]");
  if (!(confinement_length > 0.0)) throw InvalidArgument("confinement length must be positive");
  if (!(wall_friction >= 0.0 && overpressure_coefficient >= 0.0 && flow_length_scale >= 0.0))
    throw InvalidArgument("wall friction, overpressure coefficient and flow length scale must be non-negative");
}

double critical_pressure_ratio(double gamma) { return std::pow(2.0 / (gamma + 1.0), gamma / (gamma - 1.0)); }

NozzleFlow nozzle_exit_state(const AirModel& air, double supply_kpa, const GripperGeometry& gripper,
                             const AeroConstants& constants) {
  if (!(supply_kpa >= 0.0)) throw InvalidArgument("supply pressure must be non-negative");
  NozzleFlow f;
  f.discharge_coefficient = constants.discharge_coefficient;
  if (supply_kpa == 0.0) return f;

  const double g = air.gamma;
  const double p_amb = air.ambient_pressure * 1e3;
  const double p0 = p_amb + supply_kpa * 1e3;
  const double crit = critical_pressure_ratio(g);
  const double expo = (g - 1.0) / g;
  f.pressure_ratio = p_amb / p0;
  f.jet_velocity =
      std::sqrt(2.0 * g / (g - 1.0) * air.gas_constant * air.temperature * (1.0 - std::pow(f.pressure_ratio, expo)));

  double t_exit = 0.0;
  double p_exit = 0.0;
  if (f.pressure_ratio <= crit) {
    f.choked = true;
    t_exit = air.temperature * 2.0 / (g + 1.0);
    p_exit = p0 * crit;
    f.exit_velocity = std::sqrt(g * air.gas_constant * t_exit);
  } else {
    t_exit = air.temperature * std::pow(f.pressure_ratio, expo);
    p_exit = p_amb;
    f.exit_velocity = f.jet_velocity;
  }
  const double d = gripper.nozzle_diameter * kMm;
  const double area = std::numbers::pi * d * d / 4.0;
  const double rho_exit = p_exit / (air.gas_constant * t_exit);
  f.mass_flow_per_nozzle = constants.discharge_coefficient * area * rho_exit * f.exit_velocity;
  f.total_mass_flow = f.mass_flow_per_nozzle * gripper.nozzle_count;
  return f;
}

double gap_attenuation(double gap, double length, const AeroConstants& c) {
  return 1.0 / (1.0 + c.gap_sensitivity * gap / length);
}

VortexFlowState swirl_state(const NozzleFlow& flow, const GripperGeometry& gripper, double mean_gap,
                            const AirModel& air, const AeroConstants& c, double supply_kpa, double standoff) {
  VortexFlowState s;
  s.effective_density = air.density;
  s.supply_pressure = supply_kpa;
  s.total_mass_flow = flow.total_mass_flow;
  s.attenuation_length = c.attenuation_length + c.flow_length_scale * flow.total_mass_flow * 1e3;
  if (flow.jet_velocity <= 0.0) return s;

  // Angular momentum balance in the cavity: jet momentum in equals wall drag
  // rho * k_f * A_wall * u^2, solved for the bulk swirl speed u.
  double bulk = flow.jet_velocity;
  if (c.wall_friction > 0.0) {
    const double rc = gripper.cavity_radius() * kMm;
    const double hc = gripper.cavity_height * kMm;
    const double wall_area = std::numbers::pi * rc * rc + 2.0 * std::numbers::pi * rc * hc;
    const double lambda = flow.total_mass_flow / (c.wall_friction * air.density * wall_area);
    bulk = 2.0 * lambda * flow.jet_velocity / (lambda + std::sqrt(lambda * lambda + 4.0 * lambda * flow.jet_velocity));
  }
  // Once the surface backs off by more than a few cavity depths the vortex is
  // no longer closed by it and the swirl collapses. Driven by the closest
  // approach rather than the mean gap, so deep concave surfaces still seal.
  const double loose = standoff / c.confinement_length;
  const double confinement = 1.0 / (1.0 + loose * loose * loose * loose);
  s.circumferential_velocity =
      c.swirl_efficiency * bulk * gap_attenuation(mean_gap, s.attenuation_length, c) * confinement;
  s.angular_velocity = 2.0 * s.circumferential_velocity / (gripper.cavity_diameter * kMm);
  return s;
}

double lift_force_uniform(const VortexFlowState& state, const GripperGeometry& gripper, const AirModel& air) {
  const double r = gripper.cavity_radius() * kMm;
  const double w = state.angular_velocity;
  return 0.25 * air.density * std::numbers::pi * w * w * r * r * r * r;
}

PressureField pressure_field(const VortexFlowState& state, const GapField& field, const AirModel& air,
                             const AeroConstants& c) {
  const PolarGrid& grid = field.grid;
  const std::size_t nt = grid.sectors();
  const std::size_t n_cav = static_cast<std::size_t>(grid.cavity_rings);
  const std::size_t n_ann = grid.rings() - n_cav;
  const double dth = grid.angle_step();
  const double rg = grid.face_radius;
  const double rb = grid.body_radius;

  PressureField p;
  p.gauge.assign(grid.size(), 0.0);
  p.area.resize(grid.size());
  for (std::size_t i = 0; i < grid.rings(); ++i)
    std::fill_n(p.area.begin() + static_cast<std::ptrdiff_t>(i * nt), nt, grid.area(i) * kMm * kMm);

  // Annulus overpressure: the swirl exhausts through the narrowest section on
  // each ray, and the resulting stagnation pressure decays along a
  // lubrication channel of local resistance dr / (r h^3).
  double exit_pressure = 0.0;
  std::vector<double> weight(n_ann * nt, 0.0);
  if (state.total_mass_flow > 0.0 && n_ann > 0) {
    double conductance = 0.0;
    std::vector<double> res(n_ann);
    for (std::size_t j = 0; j < nt; ++j) {
      const double body = std::max(field.body_clearance[j], kMinThroat);
      double throat = std::max(field.rim_clearance[j], kMinThroat);
      throat = std::min(throat, body);
      double total = 0.0;
      for (std::size_t a = 0; a < n_ann; ++a) {
        const double h = std::max(field.wall_clearance[a * nt + j], kMinThroat);
        throat = std::min(throat, h);
        res[a] = grid.widths[n_cav + a] / (grid.radii[n_cav + a] * h * h * h);
        total += res[a];
      }
      const double exit_res = (rb - rg) / (rg * body * body * body);
      total += exit_res;
      double downstream = 0.0;
      for (std::size_t a = n_ann; a-- > 0;) {
        weight[a * nt + j] = (downstream + 0.5 * res[a] + exit_res) / total;
        downstream += res[a];
      }
      conductance += throat * kMm * rg * kMm * dth;
    }
    const double v = state.total_mass_flow / (air.density * conductance);
    exit_pressure = std::min(c.overpressure_coefficient * 0.5 * air.density * v * v, state.supply_pressure * 1e3);
  }

  const double asym = leakage_asymmetry(field);
  const double rc = grid.cavity_radius * kMm;
  const double w = state.angular_velocity;
  const double asym_factor = 1.0 - c.asymmetry_penalty * asym;
  for (std::size_t i = 0; i < grid.rings(); ++i) {
    const double r = grid.radii[i] * kMm;
    for (std::size_t j = 0; j < nt; ++j) {
      const std::size_t k = grid.index(i, j);
      if (i < n_cav) {
        const double suction = 0.5 * air.density * w * w * (rc * rc - r * r) *
                               gap_attenuation(field.gap[k], state.attenuation_length, c) * asym_factor;
        p.gauge[k] = exit_pressure - suction;
      } else {
        p.gauge[k] = exit_pressure * weight[(i - n_cav) * nt + j];
      }
      if (p.gauge[k] < 0.0) p.suction_zone_area += p.area[k];
      if (p.gauge[k] > 0.0) p.overpressure_zone_area += p.area[k];
    }
  }
  return p;
}

double net_lift(const PressureField& field) {
  double f = 0.0;
  for (std::size_t k = 0; k < field.gauge.size(); ++k) f -= field.gauge[k] * field.area[k];
  return f;
}

LiftModel::LiftModel(const GripperGeometry& gripper, const SurfaceSpec& surface, double supply_kpa,
                     const AirModel& air, const AeroConstants& constants, const GridSpec& grid)
    : gripper_(gripper), air_(air), constants_(constants), supply_kpa_(supply_kpa), gaps_(gripper, surface, grid) {
  air_.validate();
  constants_.validate();
  flow_ = nozzle_exit_state(air_, supply_kpa_, gripper_, constants_);
}

double LiftModel::minimum_standoff() const {
  return gripper_.friction_elements ? gripper_.friction_elements->element_height : 0.0;
}

double LiftModel::raw_lift(double standoff) const {
  if (flow_.total_mass_flow <= 0.0) return 0.0;
  const GapField field = gaps_.at(standoff);
  const VortexFlowState state =
      swirl_state(flow_, gripper_, field.mean_gap, air_, constants_, supply_kpa_, field.standoff);
  return net_lift(pressure_field(state, field, air_, constants_));
}

double LiftModel::lift(double standoff) const {
  if (!gripper_.friction_elements) return raw_lift(standoff);
  const FrictionElementSpec& pads = *gripper_.friction_elements;
  return raw_lift(std::max(standoff, pads.element_height)) * pads.lift_factor;
}

double lift_at_standoff(const GripperGeometry& gripper, const SurfaceSpec& surface, double supply_kpa,
                        const AirModel& air, const AeroConstants& constants, double standoff, const GridSpec& grid) {
  return LiftModel(gripper, surface, supply_kpa, air, constants, grid).lift(standoff);
}

LiftCurve lift_curve(const GripperGeometry& gripper, const SurfaceSpec& surface, double supply_kpa,
                     const AirModel& air, const AeroConstants& constants, const LiftCurveOptions& options) {
  if (options.samples < 16) throw InvalidArgument("a lift curve needs at least 16 samples");
  const LiftModel model(gripper, surface, supply_kpa, air, constants, options.grid);
  const double h_min = model.minimum_standoff();
  if (!(options.h_max > h_min)) throw InvalidArgument("lift curve range must extend past the minimum standoff");

  // Quadratic spacing concentrates samples near contact, where the curve is
  // steepest.
  LiftCurve curve;
  const int n = options.samples;
  std::size_t best = 0;
  for (int k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / (n - 1);
    const double h = h_min + (options.h_max - h_min) * t * t;
    curve.samples.push_back({h, model.lift(h)});
    if (curve.samples.back().force > curve.samples[best].force) best = static_cast<std::size_t>(k);
  }

  if (options.refine_peak && best > 0 && best + 1 < curve.samples.size() && curve.samples[best].force > 0.0) {
    const double a = curve.samples[best - 1].height;
    const double b = curve.samples[best + 1].height;
    std::uintmax_t iters = 60;
    const auto peak =
        boost::math::tools::brent_find_minima([&](double h) { return -model.lift(h); }, a, b, 40, iters);
    if (-peak.second > curve.samples[best].force) {
      const LiftSample s{peak.first, -peak.second};
      const auto pos = std::upper_bound(curve.samples.begin(), curve.samples.end(), s.height,
                                        [](double h, const LiftSample& x) { return h < x.height; });
      best = static_cast<std::size_t>(pos - curve.samples.begin());
      curve.samples.insert(pos, s);
    }
  }
  curve.f_max = curve.samples[best].force;
  curve.h_opt = curve.samples[best].height;
  return curve;
}

}  // namespace vortexgrip
