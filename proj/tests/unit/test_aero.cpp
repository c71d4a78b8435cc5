#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "vortexgrip/aero.hpp"
#include "vortexgrip/error.hpp"
#include "vortexgrip/protocol.hpp"

using namespace vortexgrip;

namespace {

const GripperGeometry kG1 = preset_gripper("G1");

// Composite Simpson integral of the forced-vortex suction 0.5 rho w^2 (R^2 - r^2)
// over the disk of radius R.
double suction_quadrature(double rho, double omega, double radius) {
  const int n = 2000;
  const double h = radius / n;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double r = i * h;
    const double f = 0.5 * rho * omega * omega * (radius * radius - r * r) * 2.0 * std::numbers::pi * r;
    s += f * (i == 0 || i == n ? 1.0 : (i % 2 ? 4.0 : 2.0));
  }
  return s * h / 3.0;
}

VortexFlowState state_with_omega(double omega) {
  VortexFlowState s;
  s.angular_velocity = omega;
  return s;
}

}  // namespace

TEST(Aero, ChokedBoundary) {
  const AirModel air;
  const NozzleFlow at100 = nozzle_exit_state(air, 100.0, kG1);
  EXPECT_NEAR(at100.pressure_ratio, 101.325 / 201.325, 1e-15);
  EXPECT_NEAR(at100.pressure_ratio, 0.5033, 5e-5);
  EXPECT_TRUE(at100.choked);
  const NozzleFlow at10 = nozzle_exit_state(air, 10.0, kG1);
  EXPECT_NEAR(at10.pressure_ratio, 101.325 / 111.325, 1e-15);
  EXPECT_NEAR(at10.pressure_ratio, 0.9101, 1e-4);
  EXPECT_FALSE(at10.choked);
  EXPECT_NEAR(critical_pressure_ratio(1.4), 0.5283, 5e-5);
  EXPECT_DOUBLE_EQ(critical_pressure_ratio(1.4), kCriticalPressureRatioAir);
}

TEST(Aero, ChokedExactlyAtCriticalRatio) {
  const AirModel air;
  const double crit = critical_pressure_ratio(air.gamma);
  const double p_boundary = air.ambient_pressure / crit - air.ambient_pressure;
  // Straddle the boundary by a few ulps: choking follows the computed ratio.
  for (double p : {std::nextafter(p_boundary, 0.0), p_boundary, std::nextafter(p_boundary, 1e9), p_boundary * 0.999,
                   p_boundary * 1.001}) {
    const NozzleFlow f = nozzle_exit_state(air, p, kG1);
    EXPECT_EQ(f.choked, f.pressure_ratio <= crit) << p;
  }
  EXPECT_FALSE(nozzle_exit_state(air, p_boundary * 0.999, kG1).choked);
  EXPECT_TRUE(nozzle_exit_state(air, p_boundary * 1.001, kG1).choked);
}

TEST(Aero, ZeroSupplyNoFlow) {
  const NozzleFlow f = nozzle_exit_state(AirModel{}, 0.0, kG1);
  EXPECT_EQ(f.exit_velocity, 0.0);
  EXPECT_EQ(f.total_mass_flow, 0.0);
  EXPECT_FALSE(f.choked);
  const VortexFlowState s = swirl_state(f, kG1, 0.0, AirModel{}, AeroConstants{});
  EXPECT_EQ(s.circumferential_velocity, 0.0);
  EXPECT_EQ(s.angular_velocity, 0.0);
  EXPECT_THROW(nozzle_exit_state(AirModel{}, -1.0, kG1), InvalidArgument);
}

TEST(Aero, ChokedExitIsSonicAndMassFlowScalesWithNozzles) {
  const AirModel air;
  const NozzleFlow f = nozzle_exit_state(air, 300.0, kG1);
  const double t_exit = air.temperature * 2.0 / (air.gamma + 1.0);
  EXPECT_NEAR(f.exit_velocity, std::sqrt(air.gamma * air.gas_constant * t_exit), 1e-9);
  EXPECT_DOUBLE_EQ(f.total_mass_flow, 2.0 * f.mass_flow_per_nozzle);
  EXPECT_GT(f.jet_velocity, f.exit_velocity);
}

TEST(Aero, SwirlExample) {
  NozzleFlow flow;
  flow.jet_velocity = 300.0;
  flow.exit_velocity = 300.0;
  AeroConstants c;
  c.swirl_efficiency = 0.5;
  c.wall_friction = 0.0;
  c.flow_length_scale = 0.0;
  const VortexFlowState s = swirl_state(flow, kG1, 0.0, AirModel{}, c);
  EXPECT_NEAR(s.circumferential_velocity, 150.0, 1e-12);
  EXPECT_NEAR(s.angular_velocity, 2.0 * 150.0 / 0.014, 1e-9);
  EXPECT_NEAR(s.angular_velocity, 21428.57, 0.01);
}

TEST(Aero, WallDragSlowsSwirl) {
  const AirModel air;
  const NozzleFlow flow = nozzle_exit_state(air, 200.0, kG1);
  const VortexFlowState s = swirl_state(flow, kG1, 0.0, air, AeroConstants{});
  EXPECT_GT(s.circumferential_velocity, 0.0);
  EXPECT_LT(s.circumferential_velocity, flow.jet_velocity);
}

TEST(Aero, UniformLiftExample) {
  AirModel air;
  air.density = 1.2;
  const double f = lift_force_uniform(state_with_omega(20000.0), kG1, air);
  EXPECT_NEAR(f, 0.25 * 1.2 * std::numbers::pi * 4e8 * std::pow(0.007, 4), 1e-15);
  EXPECT_NEAR(f, 0.905, 5e-4);
  EXPECT_EQ(lift_force_uniform(state_with_omega(0.0), kG1, air), 0.0);
}

TEST(Aero, UniformLiftMatchesRadialQuadrature) {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> rho_d(0.8, 1.6), omega_d(1e3, 5e4), dc_d(5.0, 30.0);
  for (int i = 0; i < 100; ++i) {
    AirModel air;
    air.density = rho_d(gen);
    GripperGeometry g = kG1;
    g.cavity_diameter = dc_d(gen);
    const double omega = omega_d(gen);
    const double closed = lift_force_uniform(state_with_omega(omega), g, air);
    const double numeric = suction_quadrature(air.density, omega, g.cavity_radius() * 1e-3);
    EXPECT_NEAR(closed / numeric, 1.0, 1e-3);
  }
}

TEST(Aero, UniformLiftScaling) {
  const AirModel air;
  const double f1 = lift_force_uniform(state_with_omega(12345.0), kG1, air);
  EXPECT_EQ(lift_force_uniform(state_with_omega(2 * 12345.0), kG1, air), 4.0 * f1);
  GripperGeometry big = kG1;
  big.cavity_diameter = 2.0 * kG1.cavity_diameter;
  EXPECT_EQ(lift_force_uniform(state_with_omega(12345.0), big, air), 16.0 * f1);
}

TEST(Aero, UniformFieldQuadratureMatchesClosedForm) {
  const AirModel air;
  AeroConstants c;
  c.overpressure_coefficient = 0.0;
  const NozzleFlow flow = nozzle_exit_state(air, 200.0, kG1);
  double prev_err = 0.0;
  for (int level = 0; level < 3; ++level) {
    const GridSpec grid{32 << level, 64};
    const GapField field = gap_field(kG1, SurfaceSpec::flat(), 0.3, grid);
    const VortexFlowState s = swirl_state(flow, kG1, field.mean_gap, air, c, 200.0);
    const double expected = lift_force_uniform(s, kG1, air) * gap_attenuation(field.mean_gap, s.attenuation_length, c);
    const double got = net_lift(pressure_field(s, field, air, c));
    const double err = std::abs(got - expected) / expected;
    if (level >= 1) {
      EXPECT_LT(err, 5e-3);
      EXPECT_LT(err, 0.5 * prev_err);
    }
    prev_err = err;
  }
}

TEST(Aero, ZeroSwirlZeroPressure) {
  const AirModel air;
  const GapField field = gap_field(kG1, SurfaceSpec::flat(), 0.3);
  const PressureField p = pressure_field(VortexFlowState{}, field, air, AeroConstants{});
  for (double g : p.gauge) EXPECT_EQ(g, 0.0);
  EXPECT_EQ(net_lift(p), 0.0);
}

TEST(Aero, OverpressureOnlyAnnulusPushesAway) {
  const AirModel air;
  const NozzleFlow flow = nozzle_exit_state(air, 300.0, kG1);
  const GapField field = gap_field(kG1, SurfaceSpec::flat(), 0.05);
  VortexFlowState s = swirl_state(flow, kG1, field.mean_gap, air, AeroConstants{}, 300.0);
  s.angular_velocity = 0.0;
  const PressureField p = pressure_field(s, field, air, AeroConstants{});
  EXPECT_LT(net_lift(p), 0.0);
  EXPECT_GT(p.overpressure_zone_area, 0.0);
  EXPECT_EQ(p.suction_zone_area, 0.0);
}

TEST(Aero, OverpressureClosedFormOnFlatSurface) {
  // On a flat plate every ray sees the same channel, so the exit pressure is
  // c_p * q with q from the mass flow through the rim throat.
  const AirModel air;
  AeroConstants c;
  const double standoff = 0.5;
  const NozzleFlow flow = nozzle_exit_state(air, 400.0, kG1);
  const GapField field = gap_field(kG1, SurfaceSpec::flat(), standoff);
  VortexFlowState s = swirl_state(flow, kG1, field.mean_gap, air, c, 400.0);
  s.angular_velocity = 0.0;
  const PressureField p = pressure_field(s, field, air, c);
  const double throat_area = standoff * 1e-3 * 2.0 * std::numbers::pi * 10e-3;
  const double v = flow.total_mass_flow / (air.density * throat_area);
  const double exit_pressure = c.overpressure_coefficient * 0.5 * air.density * v * v;
  // Cavity samples carry the exit pressure itself.
  EXPECT_NEAR(p.gauge[0], exit_pressure, 1e-9 * exit_pressure);
  // Annulus pressure decays outward.
  const std::size_t nt = field.grid.sectors();
  const std::size_t first = static_cast<std::size_t>(field.grid.cavity_rings);
  EXPECT_LT(p.gauge[(field.grid.rings() - 1) * nt], p.gauge[first * nt]);
  EXPECT_LE(p.gauge[first * nt], exit_pressure);
}

TEST(Aero, AsymmetryPenaltyReducesSuction) {
  const AirModel air;
  const SurfaceSpec cyl{SurfaceFamily::CylinderConvex, 20.0, 0.5};
  AeroConstants off;
  AeroConstants on;
  on.asymmetry_penalty = 0.5;
  const double f_off = lift_at_standoff(kG1, cyl, 300.0, air, off, 0.3);
  const double f_on = lift_at_standoff(kG1, cyl, 300.0, air, on, 0.3);
  EXPECT_LT(f_on, f_off);
  // On an axisymmetric surface the penalty has no effect.
  const SurfaceSpec dome{SurfaceFamily::DomeConvex, 20.0, 0.5};
  EXPECT_NEAR(lift_at_standoff(kG1, dome, 300.0, air, on, 0.3), lift_at_standoff(kG1, dome, 300.0, air, off, 0.3),
              1e-9);
}

TEST(Aero, CurveDecaysAndGrowsWithPressure) {
  const AirModel air;
  const AeroConstants c;
  LiftCurveOptions opts;
  opts.grid = {32, 64};
  opts.samples = 61;
  for (const auto& id : preset_gripper_ids()) {
    for (const SurfaceSpec& s : reference_surfaces()) {
      // A 15 mm bowl wraps the 26 mm body, so the exhaust stays throttled:
      // the small nozzle barely lifts there and the tail is a small push.
      const bool wrapped = s.family == SurfaceFamily::DomeConcave && s.radius < kG1.body_radius() + 5.0;
      double prev = -1e9;
      for (double p : reference_pressures()) {
        const LiftCurve curve = lift_curve(preset_gripper(id), s, p, air, c, opts);
        const double tail = curve.samples.back().force;
        EXPECT_LT(tail, 0.05 * curve.f_max) << id << " " << to_string(s.family) << " " << s.radius << " " << p;
        if (!wrapped) {
          EXPECT_GT(curve.f_max, 0.0);
          EXPECT_LT(std::abs(tail), 0.05 * curve.f_max)
              << id << " " << to_string(s.family) << " " << s.radius << " " << p;
        }
        EXPECT_GE(curve.f_max, prev) << id << " " << to_string(s.family) << " " << s.radius << " " << p;
        prev = curve.f_max;
      }
    }
  }
}

TEST(Aero, ConfinementCutoff) {
  NozzleFlow flow;
  flow.jet_velocity = 300.0;
  AeroConstants c;
  c.wall_friction = 0.0;
  const AirModel air;
  const double closed = swirl_state(flow, kG1, 0.5, air, c, 0.0, 0.0).circumferential_velocity;
  const double at_length = swirl_state(flow, kG1, 0.5, air, c, 0.0, c.confinement_length).circumferential_velocity;
  EXPECT_NEAR(at_length, 0.5 * closed, 1e-12 * closed);
  c.gap_sensitivity *= 2.0;
  EXPECT_LT(swirl_state(flow, kG1, 0.5, air, c).circumferential_velocity, closed);
}

TEST(Aero, CurveInvariants) {
  const LiftCurve curve = lift_curve(kG1, SurfaceSpec::flat(), 200.0, AirModel{}, AeroConstants{});
  double best = 0.0;
  for (std::size_t i = 0; i < curve.samples.size(); ++i) {
    best = std::max(best, curve.samples[i].force);
    if (i > 0) {
      EXPECT_GT(curve.samples[i].height, curve.samples[i - 1].height);
    }
  }
  EXPECT_EQ(curve.f_max, best);
  EXPECT_EQ(curve.samples.front().height, 0.0);
  EXPECT_EQ(curve.samples.back().height, 10.0);
  EXPECT_THROW(lift_curve(kG1, SurfaceSpec::flat(), 200.0, AirModel{}, AeroConstants{}, {10.0, 8, {}, true}),
               InvalidArgument);
}

TEST(Aero, ZeroSupplyFlatCurve) {
  const LiftCurve curve = lift_curve(kG1, SurfaceSpec::flat(), 0.0, AirModel{}, AeroConstants{});
  for (const auto& s : curve.samples) EXPECT_EQ(s.force, 0.0);
  EXPECT_EQ(curve.f_max, 0.0);
}

TEST(Aero, NozzleStepRaisesLiftAndPeakHeight) {
  const AirModel air;
  const AeroConstants c;
  double prev_f = 0.0;
  double prev_h = 0.0;
  for (const auto& id : preset_gripper_ids()) {
    const LiftCurve curve = lift_curve(preset_gripper(id), SurfaceSpec::flat(), 200.0, air, c);
    EXPECT_GT(curve.f_max, prev_f);
    EXPECT_GT(curve.h_opt, prev_h);
    prev_f = curve.f_max;
    prev_h = curve.h_opt;
  }
}

TEST(Aero, AmbientPressureChangesOnlyThroughRatio) {
  AirModel a;
  AirModel b;
  b.ambient_pressure = 90.0;
  const NozzleFlow fa = nozzle_exit_state(a, 100.0, kG1);
  const NozzleFlow fb = nozzle_exit_state(b, 100.0 * 90.0 / 101.325, kG1);
  EXPECT_NEAR(fa.pressure_ratio, fb.pressure_ratio, 1e-15);
  EXPECT_NEAR(fa.jet_velocity, fb.jet_velocity, 1e-9);
}

TEST(Aero, FrictionElementsClampAndScale) {
  const AirModel air;
  const AeroConstants c;
  GripperGeometry padded = kG1;
  padded.friction_elements = FrictionElementSpec{};
  const LiftModel bare(kG1, SurfaceSpec::flat(), 300.0, air, c);
  const LiftModel with_pads(padded, SurfaceSpec::flat(), 300.0, air, c);
  EXPECT_EQ(with_pads.minimum_standoff(), 0.4);
  EXPECT_EQ(bare.minimum_standoff(), 0.0);
  for (double h : {0.0, 0.1, 0.4, 0.7, 2.0, 6.0}) {
    EXPECT_EQ(with_pads.lift(h), bare.lift(std::max(h, 0.4)) * 1.68) << h;
  }
  const LiftCurve curve = lift_curve(padded, SurfaceSpec::flat(), 300.0, air, c);
  EXPECT_EQ(curve.samples.front().height, 0.4);
  for (const auto& s : curve.samples) EXPECT_GE(s.height, 0.4);
}
