#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "vortexgrip/error.hpp"
#include "vortexgrip/protocol.hpp"

using namespace vortexgrip;

namespace {

ProtocolSettings coarse_settings() {
  ProtocolSettings s;
  s.curve.grid = {16, 32};
  s.curve.samples = 41;
  s.keep_traces = false;
  return s;
}

ExperimentCondition g1_flat(double pressure, int rep = 0) {
  return {"G1", preset_gripper("G1"), pressure, SurfaceSpec::flat(), rep};
}

}  // namespace

TEST(Protocol, ZeroPressureGivesZeroTrace) {
  const ExperimentRecord r = run_protocol(g1_flat(0.0), 0.05, 1);
  EXPECT_EQ(r.max_lift, 0.0);
  for (const auto& s : r.trace.samples) EXPECT_EQ(s.force, 0.0);
}

TEST(Protocol, Deterministic) {
  const ExperimentRecord a = run_protocol(g1_flat(300.0), 0.05, 77);
  const ExperimentRecord b = run_protocol(g1_flat(300.0), 0.05, 77);
  EXPECT_EQ(a.max_lift, b.max_lift);
  EXPECT_EQ(a.h_opt, b.h_opt);
  ASSERT_EQ(a.trace.samples.size(), b.trace.samples.size());
  for (std::size_t i = 0; i < a.trace.samples.size(); ++i) {
    EXPECT_EQ(a.trace.samples[i].time, b.trace.samples[i].time);
    EXPECT_EQ(a.trace.samples[i].height, b.trace.samples[i].height);
    EXPECT_EQ(a.trace.samples[i].force, b.trace.samples[i].force);
  }
  EXPECT_NE(run_protocol(g1_flat(300.0), 0.05, 78).max_lift, a.max_lift);
}

TEST(Protocol, NoiseFreeMatchesAeroPeak) {
  const ExperimentCondition c = g1_flat(400.0);
  const LiftCurve curve = lift_curve(c.gripper, c.surface, c.pressure, AirModel{}, AeroConstants{});
  const ExperimentRecord r = run_protocol(c, 0.0, 5);
  EXPECT_EQ(r.max_lift, curve.f_max);
  EXPECT_EQ(r.h_opt, curve.h_opt);
}

TEST(Protocol, RepeatMeanTracksCurvePeak) {
  const ExperimentCondition c = g1_flat(200.0);
  const LiftCurve curve = lift_curve(c.gripper, c.surface, c.pressure, AirModel{}, AeroConstants{});
  double sum = 0.0;
  double sq = 0.0;
  const int n = 400;
  for (int seed = 0; seed < n; ++seed) {
    const double f = record_from_curve(c, curve, 0.05, static_cast<std::uint64_t>(seed)).max_lift;
    sum += f;
    sq += f * f;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sq / n - mean * mean);
  EXPECT_NEAR(mean / curve.f_max, 1.0, 4.0 * 0.05 / std::sqrt(n));
  EXPECT_NEAR(sd / curve.f_max, 0.05, 0.01);
}

TEST(Protocol, TraceContract) {
  ExperimentCondition c = g1_flat(300.0);
  const ExperimentRecord r = run_protocol(c, 0.05, 9);
  ASSERT_GT(r.trace.samples.size(), 10u);
  EXPECT_EQ(r.trace.samples.front().height, 0.0);
  EXPECT_EQ(r.trace.samples.front().force, 0.0);
  double peak = 0.0;
  for (std::size_t i = 1; i < r.trace.samples.size(); ++i) {
    EXPECT_GT(r.trace.samples[i].time, r.trace.samples[i - 1].time);
    EXPECT_GT(r.trace.samples[i].height, r.trace.samples[i - 1].height);
    peak = std::max(peak, r.trace.samples[i].force);
  }
  EXPECT_EQ(peak, r.max_lift);
  // Constant-velocity leg: 1 mm takes 0.1 s at 0.01 m/s.
  const auto& last = r.trace.samples.back();
  const auto& prev = r.trace.samples[r.trace.samples.size() - 2];
  EXPECT_NEAR((last.time - prev.time) / (last.height - prev.height), 0.1, 1e-12);
}

TEST(Protocol, KinematicsOnSyntheticCurve) {
  // Attracted from the first sample: the ascent starts after the settle time.
  const ExperimentCondition c = g1_flat(100.0);
  LiftCurve curve;
  curve.samples = {{0.0, 0.5}, {1.0, 1.0}, {2.0, 0.2}, {8.0, 0.1}};
  curve.f_max = 1.0;
  curve.h_opt = 1.0;
  const ExperimentRecord r = record_from_curve(c, curve, 0.0, 1);
  // Heights: 0.5/0.5 = 1, 1 + 1/0.5 = 3, 2 + 0.4 = 2.4 (dropped), 8 + 0.2 = 8.2.
  ASSERT_EQ(r.trace.samples.size(), 4u);
  EXPECT_DOUBLE_EQ(r.trace.samples[1].height, 1.0);
  EXPECT_DOUBLE_EQ(r.trace.samples[2].height, 3.0);
  EXPECT_DOUBLE_EQ(r.trace.samples[3].height, 8.2);
  // Trapezoid at 10 mm/s and 10 mm/s^2: 5 mm ramp, then cruise.
  EXPECT_DOUBLE_EQ(r.trace.samples[1].time, 0.01 + std::sqrt(2.0 * 1.0 / 10.0));
  EXPECT_DOUBLE_EQ(r.trace.samples[3].time, 0.01 + 1.0 + 3.2 / 10.0);
  EXPECT_EQ(r.max_lift, 1.0);
  EXPECT_EQ(r.h_opt, 1.0);

  // Pushed at contact: the trace starts at the interpolated zero crossing.
  curve.samples = {{0.0, -1.0}, {1.0, 1.0}, {3.0, 0.5}};
  const ExperimentRecord z = record_from_curve(c, curve, 0.0, 1);
  ASSERT_EQ(z.trace.samples.size(), 3u);
  EXPECT_EQ(z.trace.samples[0].time, 0.0);
  EXPECT_DOUBLE_EQ(z.trace.samples[1].height, 1.0 + 2.0 - 0.5);

  // Never attracted: a single zero sample and no lift.
  curve.samples = {{0.0, -1.0}, {1.0, -0.5}};
  const ExperimentRecord n = record_from_curve(c, curve, 0.05, 1);
  EXPECT_EQ(n.trace.samples.size(), 1u);
  EXPECT_EQ(n.max_lift, 0.0);
}

TEST(Protocol, ReferencePlanShape) {
  const FactorialPlan plan = reference_plan();
  EXPECT_EQ(plan.size(), 4920u);
  EXPECT_EQ(reference_surfaces().size(), 41u);
  const Dataset ds = generate_dataset(plan, 0.05, 42, coarse_settings());
  ASSERT_EQ(ds.records.size(), 4920u);
  const Dataset aug = augment(ds);
  ASSERT_EQ(aug.records.size(), 4920u + 123u);
  for (std::size_t i = 4920; i < aug.records.size(); ++i) {
    EXPECT_EQ(aug.records[i].condition.pressure, 0.0);
    EXPECT_EQ(aug.records[i].max_lift, 0.0);
  }
  for (std::size_t i = 0; i < 4920; ++i) {
    EXPECT_EQ(aug.records[i].max_lift, ds.records[i].max_lift);
  }
  EXPECT_TRUE(augment(Dataset{}).records.empty());
}

TEST(Protocol, CanonicalOrderAndDeterminismAcrossThreads) {
  FactorialPlan plan;
  plan.grippers = {{"G1", preset_gripper("G1")}, {"G3", preset_gripper("G3")}};
  plan.pressures = {100, 400};
  plan.surfaces = {SurfaceSpec::flat(), {SurfaceFamily::DomeConvex, 30.0, 0.5}};
  plan.repetitions = 3;
  const Dataset one = generate_dataset(plan, 0.05, 11, coarse_settings(), 1);
  const Dataset four = generate_dataset(plan, 0.05, 11, coarse_settings(), 4);
  ASSERT_EQ(one.records.size(), 24u);
  for (std::size_t i = 0; i < one.records.size(); ++i) {
    EXPECT_EQ(one.records[i].seed, four.records[i].seed);
    EXPECT_EQ(one.records[i].max_lift, four.records[i].max_lift);
    EXPECT_EQ(one.records[i].condition.repetition, static_cast<int>(i % 3));
  }
  EXPECT_EQ(one.records[0].condition.gripper_id, "G1");
  EXPECT_EQ(one.records[12].condition.gripper_id, "G3");
  EXPECT_EQ(one.records[6].condition.pressure, 400.0);
}

TEST(Protocol, RepetitionsGetDistinctSeeds) {
  FactorialPlan plan;
  plan.grippers = {{"G2", preset_gripper("G2")}};
  plan.pressures = {200};
  plan.surfaces = {{SurfaceFamily::CylinderConvex, 50.0, 0.5}};
  plan.repetitions = 10;
  const Dataset ds = generate_dataset(plan, 0.05, 5, coarse_settings());
  ASSERT_EQ(ds.records.size(), 10u);
  std::set<std::uint64_t> seeds;
  for (const auto& r : ds.records) {
    seeds.insert(r.seed);
    EXPECT_EQ(r.condition.gripper_id, "G2");
    EXPECT_EQ(r.condition.pressure, 200.0);
    EXPECT_EQ(r.condition.surface.radius, 50.0);
  }
  EXPECT_EQ(seeds.size(), 10u);
}

TEST(Protocol, SummaryGrowsWithPressure) {
  FactorialPlan plan;
  plan.grippers = {{"G1", preset_gripper("G1")}};
  plan.pressures = reference_pressures();
  plan.surfaces = {SurfaceSpec::flat()};
  plan.repetitions = 10;
  const Dataset ds = generate_dataset(plan, 0.05, 42);
  double prev = 0.0;
  for (std::size_t p = 0; p < 4; ++p) {
    double mean = 0.0;
    for (std::size_t r = 0; r < 10; ++r) mean += ds.records[p * 10 + r].max_lift / 10.0;
    EXPECT_GT(mean, prev);
    prev = mean;
  }
}

TEST(Protocol, Errors) {
  EXPECT_THROW(generate_dataset(FactorialPlan{}, 0.05, 1), InvalidArgument);
  EXPECT_THROW(run_protocol(g1_flat(100.0), -0.1, 1), InvalidArgument);
  ExperimentCondition bad = g1_flat(100.0);
  bad.surface = {SurfaceFamily::DomeConcave, 5.0, 0.5};
  EXPECT_THROW(run_protocol(bad, 0.05, 1), SurfaceTooSmall);
}
