#include "vortexgrip/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <tuple>

#include <Eigen/Dense>

#include "vortexgrip/error.hpp"
#include "vortexgrip/parallel.hpp"
#include "vortexgrip/protocol.hpp"

namespace vortexgrip {

namespace {

struct CurveKey {
  int gripper;  // 0..2 for G1..G3
  SurfaceFamily family;
  double radius;
  double pressure;
  auto tie() const { return std::tie(gripper, family, radius, pressure); }
  bool operator<(const CurveKey& o) const { return tie() < o.tie(); }
};

class TrendEvaluator {
 public:
  explicit TrendEvaluator(const TrendOptions& options) : options_(options) {
    const auto& ps = reference_pressures();
    for (double p : ps) {
      request(0, SurfaceFamily::Flat, kFlatRadius, p);
      request(0, SurfaceFamily::CylinderConvex, 15, p);
      request(0, SurfaceFamily::CylinderConvex, 100, p);
      for (double r : {30.0, 35.0, 40.0, 45.0}) request(0, SurfaceFamily::DomeConvex, r, p);
      for (int g = 0; g < 3; ++g) {
        request(g, SurfaceFamily::DomeConcave, 15, p);
        request(g, SurfaceFamily::DomeConcave, 20, p);
      }
    }
    for (int g = 0; g < 3; ++g) request(g, SurfaceFamily::Flat, kFlatRadius, 200);
    for (const auto& s : reference_surfaces()) request(2, s.family, s.radius, 400);
  }

  TrendValues operator()(const AirModel& air, const AeroConstants& constants) const {
    std::vector<double> fmax(keys_.size());
    const auto& ids = preset_gripper_ids();
    parallel_for(keys_.size(), options_.threads, [&](std::size_t i) {
      const CurveKey& k = keys_[i];
      const SurfaceSpec surface{k.family, k.radius, 0.5};
      fmax[i] = lift_curve(preset_gripper(ids[k.gripper]), surface, k.pressure, air, constants, options_.curve).f_max;
    });
    auto F = [&](int g, SurfaceFamily f, double r, double p) { return fmax[index_.at({g, f, r, p})]; };
    auto ratio = [](double num, double den) { return den > 0.0 ? num / den : 0.0; };
    const auto& ps = reference_pressures();

    TrendValues v{};
    v[0] = (F(0, SurfaceFamily::Flat, kFlatRadius, ps.back()) - F(0, SurfaceFamily::Flat, kFlatRadius, ps.front())) /
           static_cast<double>(ps.size() - 1);
    v[1] = (F(2, SurfaceFamily::Flat, kFlatRadius, 200) - F(0, SurfaceFamily::Flat, kFlatRadius, 200)) / 2.0;
    double drop = 0.0;
    double cyl = 0.0;
    double gain = 0.0;
    for (double p : ps) {
      for (int g = 0; g < 3; ++g)
        drop += 1.0 - ratio(F(g, SurfaceFamily::DomeConcave, 15, p), F(g, SurfaceFamily::DomeConcave, 20, p));
      cyl += 1.0 - ratio(F(0, SurfaceFamily::CylinderConvex, 15, p), F(0, SurfaceFamily::CylinderConvex, 100, p));
      for (double r : {30.0, 35.0, 40.0, 45.0})
        gain += ratio(F(0, SurfaceFamily::DomeConvex, r, p), F(0, SurfaceFamily::Flat, kFlatRadius, p)) - 1.0;
    }
    const double np = static_cast<double>(ps.size());
    v[2] = drop / (3.0 * np);
    v[3] = cyl / np;
    v[4] = gain / (4.0 * np);
    double best = 0.0;
    for (const auto& s : reference_surfaces()) best = std::max(best, F(2, s.family, s.radius, 400));
    v[5] = best;
    return v;
  }

 private:
  void request(int g, SurfaceFamily f, double r, double p) {
    const CurveKey k{g, f, r, p};
    if (index_.emplace(k, keys_.size()).second) keys_.push_back(k);
  }

  TrendOptions options_;
  std::vector<CurveKey> keys_;
  std::map<CurveKey, std::size_t> index_;
};

}  // namespace

std::string_view to_string(Trend trend) {
  switch (trend) {
    case Trend::PressureGain: return "pressure_gain_N";
    case Trend::NozzleGain: return "nozzle_gain_N";
    case Trend::DomeConcaveDrop: return "dome_concave_drop";
    case Trend::CylinderConvexDrop: return "cylinder_convex_drop";
    case Trend::DomeConvexGain: return "dome_convex_gain";
    case Trend::PeakForce: return "peak_force_N";
  }
  return "";
}

std::vector<TrendTarget> reference_trend_targets() {
  return {{Trend::PressureGain, 0.5},       {Trend::NozzleGain, 0.5},      {Trend::DomeConcaveDrop, 0.70},
          {Trend::CylinderConvexDrop, 0.37}, {Trend::DomeConvexGain, 0.54}, {Trend::PeakForce, 4.8}};
}

TrendValues compute_trends(const AirModel& air, const AeroConstants& constants, const TrendOptions& options) {
  return TrendEvaluator(options)(air, constants);
}

void CalibrationBounds::validate() const {
  for (std::size_t i = 0; i < 4; ++i) {
    if (!(lower[i] < upper[i])) throw InvalidArgument("calibration bounds are empty for " + calibrated_parameter_names()[i]);
  }
  if (!(lower[0] > 0.0 && upper[0] <= 1.0)) throw InvalidArgument("swirl efficiency bounds must lie in (0, 1]");
  if (!(lower[1] >= 0.0)) throw InvalidArgument("gap sensitivity bounds must be non-negative");
  if (!(lower[2] > 0.0)) throw InvalidArgument("attenuation length bounds must be positive");
  if (!(lower[3] >= 0.0 && upper[3] <= 1.0)) throw InvalidArgument("asymmetry penalty bounds must lie in [0, 1]");
}

const std::array<std::string, 4>& calibrated_parameter_names() {
  static const std::array<std::string, 4> names{"swirl_efficiency", "gap_sensitivity", "attenuation_length",
                                                "asymmetry_penalty"};
  return names;
}

std::array<double, 4> calibrated_parameters(const AeroConstants& c) {
  return {c.swirl_efficiency, c.gap_sensitivity, c.attenuation_length, c.asymmetry_penalty};
}

AeroConstants with_parameters(AeroConstants base, const std::array<double, 4>& p) {
  base.swirl_efficiency = p[0];
  base.gap_sensitivity = p[1];
  base.attenuation_length = p[2];
  base.asymmetry_penalty = p[3];
  return base;
}

CalibrationResult calibrate(const std::vector<TrendTarget>& targets, const CalibrationBounds& bounds,
                            const AirModel& air, const AeroConstants& start, const CalibrationOptions& options) {
  if (targets.empty()) throw InvalidArgument("calibration needs at least one target");
  bounds.validate();
  for (const auto& t : targets) {
    if (t.value == 0.0) throw InvalidArgument("calibration targets must be nonzero (residuals are relative)");
  }
  const TrendEvaluator evaluate(options.trends);
  const Eigen::Index m = static_cast<Eigen::Index>(targets.size());
  constexpr Eigen::Index n = 4;

  // Work in unit-box coordinates so that one step size suits every parameter.
  auto to_params = [&](const Eigen::Vector4d& u) {
    std::array<double, 4> p{};
    for (std::size_t i = 0; i < 4; ++i) p[i] = bounds.lower[i] + u[static_cast<Eigen::Index>(i)] * (bounds.upper[i] - bounds.lower[i]);
    return p;
  };
  int evaluations = 0;
  auto residuals = [&](const Eigen::Vector4d& u, TrendValues* values = nullptr) {
    const TrendValues v = evaluate(air, with_parameters(start, to_params(u)));
    ++evaluations;
    Eigen::VectorXd r(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const auto& t = targets[static_cast<std::size_t>(i)];
      r[i] = (v[static_cast<std::size_t>(t.trend)] - t.value) / t.value;
    }
    if (values) *values = v;
    return r;
  };

  Eigen::Vector4d u;
  const auto p0 = calibrated_parameters(start);
  for (std::size_t i = 0; i < 4; ++i)
    u[static_cast<Eigen::Index>(i)] = std::clamp((p0[i] - bounds.lower[i]) / (bounds.upper[i] - bounds.lower[i]), 0.0, 1.0);

  TrendValues values{};
  Eigen::VectorXd r = residuals(u, &values);
  double cost = r.squaredNorm();
  double mu = 1e-2;
  constexpr double kFdStep = 1e-3;
  bool converged = cost <= options.tolerance;
  int iter = 0;

  while (!converged && iter < options.max_iterations) {
    ++iter;
    Eigen::MatrixXd J(m, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      Eigen::Vector4d up = u;
      const double h = u[j] + kFdStep <= 1.0 ? kFdStep : -kFdStep;
      up[j] += h;
      J.col(j) = (residuals(up) - r) / h;
    }
    const Eigen::Matrix4d A = J.transpose() * J;
    const Eigen::Vector4d g = J.transpose() * r;

    // Parameters sitting on a bound with the gradient pushing outward are
    // held fixed; the damped step is solved on the remaining ones.
    std::array<bool, 4> free{};
    bool stationary = true;
    for (Eigen::Index j = 0; j < n; ++j) {
      const bool pinned = (u[j] <= 0.0 && g[j] > 0.0) || (u[j] >= 1.0 && g[j] < 0.0);
      free[static_cast<std::size_t>(j)] = !pinned;
      if (!pinned && std::abs(g[j]) > 1e-9) stationary = false;
    }
    if (stationary) {
      converged = true;
      break;
    }

    bool accepted = false;
    while (mu < 1e12) {
      Eigen::Matrix4d D = A;
      Eigen::Vector4d rhs = -g;
      for (Eigen::Index j = 0; j < n; ++j) {
        D(j, j) += mu * std::max(A(j, j), 1e-12);
        if (!free[static_cast<std::size_t>(j)]) {
          D.row(j).setZero();
          D.col(j).setZero();
          D(j, j) = 1.0;
          rhs[j] = 0.0;
        }
      }
      const Eigen::Vector4d step = D.ldlt().solve(rhs);
      const Eigen::Vector4d trial = (u + step).cwiseMax(0.0).cwiseMin(1.0);
      if ((trial - u).norm() <= options.step_tolerance) {
        converged = true;
        break;
      }
      TrendValues trial_values{};
      const Eigen::VectorXd trial_r = residuals(trial, &trial_values);
      const double trial_cost = trial_r.squaredNorm();
      if (trial_cost < cost) {
        const double gain = (cost - trial_cost) / std::max(cost, 1e-300);
        u = trial;
        r = trial_r;
        values = trial_values;
        cost = trial_cost;
        mu = std::max(mu / 3.0, 1e-9);
        accepted = true;
        if (gain < options.relative_gain_tolerance || cost <= options.tolerance) converged = true;
        break;
      }
      mu *= 4.0;
    }
    if (!accepted && !converged) {
      // No descent direction left at any damping: a constrained minimum.
      converged = true;
    }
  }

  CalibrationResult out;
  out.constants = with_parameters(start, to_params(u));
  out.cost = cost;
  out.iterations = iter;
  out.evaluations = evaluations;
  out.converged = converged;
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& t = targets[static_cast<std::size_t>(i)];
    out.residuals.push_back({t.trend, t.value, values[static_cast<std::size_t>(t.trend)], r[i]});
  }
  return out;
}

}  // namespace vortexgrip
