#include <gtest/gtest.h>

#include <cmath>

#include "vortexgrip/calibration.hpp"
#include "vortexgrip/error.hpp"

using namespace vortexgrip;

namespace {

TrendOptions fast_trends() {
  TrendOptions t;
  t.curve.grid = {16, 32};
  t.curve.samples = 41;
  return t;
}

}  // namespace

TEST(Calibration, RecoversKnownConstants) {
  AeroConstants truth;
  truth.swirl_efficiency = 0.8;
  truth.gap_sensitivity = 3.0;
  truth.attenuation_length = 0.6;
  truth.asymmetry_penalty = 0.3;
  const AirModel air;
  CalibrationOptions opts;
  opts.trends = fast_trends();
  opts.relative_gain_tolerance = 0.0;
  opts.max_iterations = 60;
  const TrendValues v = compute_trends(air, truth, opts.trends);
  std::vector<TrendTarget> targets;
  for (std::size_t i = 0; i < kTrendCount; ++i) targets.push_back({static_cast<Trend>(i), v[i]});

  AeroConstants start = truth;
  start.swirl_efficiency = 0.65;
  start.gap_sensitivity = 2.2;
  start.attenuation_length = 0.9;
  start.asymmetry_penalty = 0.15;
  const CalibrationResult r = calibrate(targets, CalibrationBounds{}, air, start, opts);
  EXPECT_TRUE(r.converged);
  const auto want = calibrated_parameters(truth);
  const auto got = calibrated_parameters(r.constants);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(got[i] / want[i], 1.0, 0.01) << calibrated_parameter_names()[i];
  EXPECT_LT(r.cost, 1e-8);
}

TEST(Calibration, ResidualsCarrySign) {
  const AirModel air;
  CalibrationOptions opts;
  opts.trends = fast_trends();
  opts.max_iterations = 0;
  const TrendValues v = compute_trends(air, AeroConstants{}, opts.trends);
  const std::vector<TrendTarget> targets{{Trend::PressureGain, 2.0 * v[0]}, {Trend::PeakForce, 0.5 * v[5]}};
  const CalibrationResult r = calibrate(targets, CalibrationBounds{}, air, AeroConstants{}, opts);
  ASSERT_EQ(r.residuals.size(), 2u);
  EXPECT_EQ(r.residuals[0].trend, Trend::PressureGain);
  EXPECT_NEAR(r.residuals[0].residual, -0.5, 1e-12);
  EXPECT_NEAR(r.residuals[1].residual, 1.0, 1e-12);
  EXPECT_EQ(r.residuals[1].achieved, v[5]);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 0);
}

TEST(Calibration, DefaultsReproduceTrends) {
  TrendOptions opts = fast_trends();
  opts.curve.grid = {24, 48};
  opts.curve.samples = 81;
  const TrendValues v = compute_trends(AirModel{}, AeroConstants{}, opts);
  for (const auto& t : reference_trend_targets()) {
    const double got = v[static_cast<std::size_t>(t.trend)];
    EXPECT_NEAR(got / t.value, 1.0, 0.3) << to_string(t.trend);
  }
}

TEST(Calibration, Errors) {
  const AirModel air;
  CalibrationBounds empty;
  empty.upper[1] = empty.lower[1];
  EXPECT_THROW(calibrate(reference_trend_targets(), empty, air, AeroConstants{}), InvalidArgument);
  EXPECT_THROW(calibrate({}, CalibrationBounds{}, air, AeroConstants{}), InvalidArgument);
  EXPECT_THROW(calibrate({{Trend::PeakForce, 0.0}}, CalibrationBounds{}, air, AeroConstants{}), InvalidArgument);
}

TEST(Calibration, ParameterPacking) {
  AeroConstants c;
  const AeroConstants d = with_parameters(c, {0.5, 1.5, 2.5, 0.25});
  EXPECT_EQ(calibrated_parameters(d), (std::array<double, 4>{0.5, 1.5, 2.5, 0.25}));
  EXPECT_EQ(d.discharge_coefficient, c.discharge_coefficient);
  EXPECT_EQ(calibrated_parameter_names()[2], "attenuation_length");
  EXPECT_EQ(to_string(Trend::DomeConvexGain), "dome_convex_gain");
}
