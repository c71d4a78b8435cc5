#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vortexgrip/geometry.hpp"
#include "vortexgrip/protocol.hpp"
#include "vortexgrip/tree.hpp"

namespace vortexgrip {

struct FeatureVector {
  double nozzle_diameter = 0.0;     // mm
  double surface_radius = kFlatRadius;  // mm
  double supply_pressure = 0.0;     // kPa gauge
  SurfaceFamily family = SurfaceFamily::Flat;
};

/// Column names of the encoded design matrix. The radius enters as log10 so
/// the flat placeholder radius does not swamp the splits; flat surfaces are
/// the all-zero one-hot row.
const std::vector<std::string>& feature_schema();
std::vector<double> encode_features(const FeatureVector& f);
FeatureVector features_of(const ExperimentCondition& condition);

struct TrainingSet {
  FeatureMatrix x;
  std::vector<double> y;
};

TrainingSet training_set(const Dataset& dataset);

struct SurrogateParams {
  ForestParams forest{};
  BoostParams boost{};

  bool operator==(const SurrogateParams&) const = default;
};

struct EnsembleModel {
  std::vector<std::string> schema;
  SurrogateParams params;
  std::uint64_t seed = 0;
  RandomForest forest;
  AdaBoostR2 boost;

  double predict_forest(const std::vector<double>& x) const;
  double predict_boost(const std::vector<double>& x) const;
  /// Arithmetic mean of the forest and boosting predictions.
  double predict(const std::vector<double>& x) const;
  double predict(const FeatureVector& f) const { return predict(encode_features(f)); }

  bool operator==(const EnsembleModel&) const = default;
};

EnsembleModel fit_ensemble(const TrainingSet& data, const SurrogateParams& params, std::uint64_t seed,
                           unsigned threads = 0);

struct CVReport {
  int k = 5;
  std::uint64_t seed = 0;
  std::vector<int> fold_of;  // fold index per row
  std::vector<double> fold_scores;
  double mean_score = 0.0;
};

double r_squared(const std::vector<double>& truth, const std::vector<double>& predicted);

/// Shuffled k-fold cross-validation scored by held-out R^2.
CVReport cross_validate(const TrainingSet& data, int k, const SurrogateParams& params, std::uint64_t seed,
                        unsigned threads = 0);

struct SweepGrid {
  SurfaceFamily family = SurfaceFamily::DomeConvex;
  std::vector<double> nozzle_diameters;  // mm
  std::vector<double> radii;             // mm
  std::vector<double> pressures{400.0};  // kPa
};

/// Predictions indexed [pressure][nozzle][radius], flattened row-major.
struct SweepSurface {
  SurfaceFamily family = SurfaceFamily::DomeConvex;
  std::vector<double> nozzle_diameters;
  std::vector<double> radii;
  std::vector<double> pressures;
  std::vector<double> values;

  double at(std::size_t p, std::size_t d, std::size_t r) const {
    return values[(p * nozzle_diameters.size() + d) * radii.size() + r];
  }
  bool operator==(const SweepSurface&) const = default;
};

SweepSurface sweep_predict(const EnsembleModel& model, const SweepGrid& grid);

std::vector<double> linspace(double lo, double hi, int n);

}  // namespace vortexgrip
