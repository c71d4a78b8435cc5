#include "vortexgrip/ensemble.hpp"

#include <cmath>
#include <numeric>

#include "vortexgrip/error.hpp"
#include "vortexgrip/random.hpp"

namespace vortexgrip {

const std::vector<std::string>& feature_schema() {
  static const std::vector<std::string> names{"nozzle_diameter_mm", "log10_radius_mm", "pressure_kPa",
                                              "dome_convex",        "cylinder_convex", "dome_concave",
                                              "cylinder_concave"};
  return names;
}

std::vector<double> encode_features(const FeatureVector& f) {
  const double radius = f.family == SurfaceFamily::Flat ? kFlatRadius : f.surface_radius;
  if (!(radius > 0.0)) throw InvalidArgument("surface radius must be positive");
  std::vector<double> x{f.nozzle_diameter, std::log10(radius), f.supply_pressure, 0.0, 0.0, 0.0, 0.0};
  switch (f.family) {
    case SurfaceFamily::Flat: break;
    case SurfaceFamily::DomeConvex: x[3] = 1.0; break;
    case SurfaceFamily::CylinderConvex: x[4] = 1.0; break;
    case SurfaceFamily::DomeConcave: x[5] = 1.0; break;
    case SurfaceFamily::CylinderConcave: x[6] = 1.0; break;
  }
  return x;
}

FeatureVector features_of(const ExperimentCondition& c) {
  return {c.gripper.nozzle_diameter, c.surface.radius, c.pressure, c.surface.family};
}

TrainingSet training_set(const Dataset& dataset) {
  TrainingSet t;
  t.x = FeatureMatrix(0, feature_schema().size());
  for (const auto& rec : dataset.records) {
    t.x.push_row(encode_features(features_of(rec.condition)));
    t.y.push_back(rec.max_lift);
  }
  return t;
}

namespace {

void check_schema(const EnsembleModel& m, const std::vector<double>& x) {
  if (m.schema != feature_schema()) throw SchemaMismatch("model was trained on a different feature schema");
  if (x.size() != m.schema.size())
    throw SchemaMismatch("expected " + std::to_string(m.schema.size()) + " features, got " + std::to_string(x.size()));
}

}  // namespace

double EnsembleModel::predict_forest(const std::vector<double>& x) const {
  check_schema(*this, x);
  return forest.predict(x.data());
}

double EnsembleModel::predict_boost(const std::vector<double>& x) const {
  check_schema(*this, x);
  return boost.predict(x.data());
}

double EnsembleModel::predict(const std::vector<double>& x) const {
  return (predict_forest(x) + predict_boost(x)) / 2.0;
}

EnsembleModel fit_ensemble(const TrainingSet& data, const SurrogateParams& params, std::uint64_t seed,
                           unsigned threads) {
  if (data.x.rows == 0) throw EmptyTrainingSet("training set is empty");
  EnsembleModel m;
  m.schema = feature_schema();
  if (data.x.cols != m.schema.size()) throw SchemaMismatch("training matrix does not match the feature schema");
  m.params = params;
  m.seed = seed;
  m.forest = fit_forest(data.x, data.y, params.forest, stable_hash({seed, 1}), threads);
  m.boost = fit_adaboost(data.x, data.y, params.boost, stable_hash({seed, 2}));
  return m;
}

double r_squared(const std::vector<double>& truth, const std::vector<double>& predicted) {
  if (truth.empty() || truth.size() != predicted.size()) throw InvalidArgument("R^2 needs matching, nonempty inputs");
  const double mean = std::accumulate(truth.begin(), truth.end(), 0.0) / static_cast<double>(truth.size());
  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ss_res += (truth[i] - predicted[i]) * (truth[i] - predicted[i]);
    ss_tot += (truth[i] - mean) * (truth[i] - mean);
  }
  if (ss_tot == 0.0) return ss_res == 0.0 ? 1.0 : 0.0;
  return 1.0 - ss_res / ss_tot;
}

CVReport cross_validate(const TrainingSet& data, int k, const SurrogateParams& params, std::uint64_t seed,
                        unsigned threads) {
  const std::size_t n = data.x.rows;
  if (k < 2) throw InvalidArgument("cross-validation needs k >= 2");
  if (n < static_cast<std::size_t>(k))
    throw DatasetTooSmall("cross-validation needs at least k = " + std::to_string(k) + " rows, got " + std::to_string(n));

  CVReport rep;
  rep.k = k;
  rep.seed = seed;
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.uniform_index(i)]);
  rep.fold_of.assign(n, 0);
  for (std::size_t pos = 0; pos < n; ++pos) rep.fold_of[perm[pos]] = static_cast<int>(pos % static_cast<std::size_t>(k));

  for (int fold = 0; fold < k; ++fold) {
    TrainingSet train;
    train.x = FeatureMatrix(0, data.x.cols);
    std::vector<std::size_t> held;
    for (std::size_t i = 0; i < n; ++i) {
      if (rep.fold_of[i] == fold) {
        held.push_back(i);
      } else {
        train.x.push_row(std::vector<double>(data.x.row(i), data.x.row(i) + data.x.cols));
        train.y.push_back(data.y[i]);
      }
    }
    const EnsembleModel model =
        fit_ensemble(train, params, stable_hash({seed, static_cast<std::uint64_t>(fold)}), threads);
    std::vector<double> truth;
    std::vector<double> pred;
    for (std::size_t i : held) {
      truth.push_back(data.y[i]);
      pred.push_back(model.predict(std::vector<double>(data.x.row(i), data.x.row(i) + data.x.cols)));
    }
    rep.fold_scores.push_back(r_squared(truth, pred));
  }
  rep.mean_score = std::accumulate(rep.fold_scores.begin(), rep.fold_scores.end(), 0.0) / k;
  return rep;
}

SweepSurface sweep_predict(const EnsembleModel& model, const SweepGrid& grid) {
  if (grid.nozzle_diameters.empty() || grid.radii.empty() || grid.pressures.empty())
    throw InvalidArgument("sweep grid axes must be nonempty");
  SweepSurface s;
  s.family = grid.family;
  s.nozzle_diameters = grid.nozzle_diameters;
  s.radii = grid.radii;
  s.pressures = grid.pressures;
  s.values.reserve(grid.pressures.size() * grid.nozzle_diameters.size() * grid.radii.size());
  for (double p : grid.pressures)
    for (double d : grid.nozzle_diameters)
      for (double r : grid.radii) s.values.push_back(model.predict(FeatureVector{d, r, p, grid.family}));
  return s;
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw InvalidArgument("linspace needs at least one point");
  if (n == 1) return {lo};
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(i == n - 1 ? hi : lo + (hi - lo) * i / (n - 1));
  return v;
}

}  // namespace vortexgrip
