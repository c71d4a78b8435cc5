// Command-line front end: fabrication compensation, lift simulation, dataset
// synthesis, surrogate training and calibration.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <set>

#include <CLI11.hpp>
#include <json.hpp>

#include "vortexgrip/aero.hpp"
#include "vortexgrip/calibration.hpp"
#include "vortexgrip/config.hpp"
#include "vortexgrip/dataset_io.hpp"
#include "vortexgrip/ensemble.hpp"
#include "vortexgrip/error.hpp"
#include "vortexgrip/fabrication.hpp"
#include "vortexgrip/protocol.hpp"

namespace vg = vortexgrip;
using nlohmann::json;

namespace {

enum ExitCode {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kConfig = 3,
  kGeometry = 4,
  kFabrication = 5,
  kIo = 6,
  kTraining = 7,
  kCalibration = 8,
};

int exit_code_for(vg::ErrorKind kind) {
  switch (kind) {
    case vg::ErrorKind::InvalidArgument: return kUsage;
    case vg::ErrorKind::Config: return kConfig;
    case vg::ErrorKind::Geometry: return kGeometry;
    case vg::ErrorKind::Fabrication: return kFabrication;
    case vg::ErrorKind::Io: return kIo;
    case vg::ErrorKind::Training: return kTraining;
    case vg::ErrorKind::Calibration: return kCalibration;
  }
  return kInternal;
}

struct Globals {
  std::string config_path;
  unsigned threads = 0;
  std::optional<std::uint64_t> seed;

  vg::Config load() const {
    vg::Config c = config_path.empty() ? vg::Config{} : vg::load_config(config_path);
    if (seed) c.seed = *seed;
    return c;
  }
  std::vector<vg::ConfigEntry> entries_of(const std::string& path) const {
    return vg::parse_key_values(vg::read_file(path));
  }
};

/// Applies the zero-pressure rows unless the data already carries them.
vg::Dataset prepared(const vg::Dataset& ds, bool augment) {
  if (!augment) return ds;
  for (const auto& r : ds.records)
    if (r.condition.pressure == 0.0) return ds;
  return vg::augment(ds);
}

void print_compensation(const vg::CompensationResult& r, bool json_only) {
  const json j = {{"material", r.material},
                  {"target_printed_mm", r.target_printed},
                  {"cad_diameter_mm", r.cad_diameter},
                  {"shrinkage", r.shrinkage},
                  {"iterations", r.iterations},
                  {"printability_warning", r.printability_warning}};
  if (!json_only) {
    std::printf("%-12s %-18s %-16s %-10s %s\n", "material", "target_printed_mm", "cad_diameter_mm", "k_d", "iterations");
    std::printf("%-12s %-18.4f %-16.4f %-10.4f %d\n", r.material.c_str(), r.target_printed, r.cad_diameter, r.shrinkage,
                r.iterations);
    if (r.printability_warning)
      std::printf("warning: targets below %.2f mm tend to clog when printed in grey resin\n", vg::kPrintabilityLimit);
  }
  std::cout << j.dump() << "\n";
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
  const std::filesystem::path p(path);
  return (p.parent_path() / (p.stem().string() + suffix + p.extension().string())).string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vortex gripper design toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand
  Globals g;
  app.add_option("--config", g.config_path, "key = value config file")->envname("VORTEXGRIP_CONFIG");
  app.add_option("--threads", g.threads, "worker threads (0 = logical cores)");
  app.add_option("--seed", g.seed, "master seed overriding the config");

  // compensate
  auto* comp = app.add_subcommand("compensate", "CAD nozzle diameter needed for a printed target");
  std::string material = "grey";
  double target_mm = 0.0;
  double tolerance = 1e-6;
  bool json_only = false;
  comp->add_option("--material", material, "grey or transparent")->check(CLI::IsMember({"grey", "transparent"}));
  comp->add_option("--target-mm", target_mm, "printed diameter wanted (mm)")->required();
  comp->add_option("--tolerance", tolerance, "solver tolerance (mm)");
  comp->add_flag("--json", json_only, "print only the JSON record");

  // simulate
  auto* sim = app.add_subcommand("simulate", "lift-versus-height curve for one configuration");
  std::string gripper_id = "G1";
  std::string gripper_file;
  std::string family = "flat";
  double radius = vg::kFlatRadius;
  std::vector<double> pressures{400.0};
  std::string sim_out;
  bool friction = false;
  sim->add_option("--gripper", gripper_id, "preset gripper G1, G2 or G3");
  sim->add_option("--gripper-file", gripper_file, "gripper.* keys in a config-format file");
  sim->add_option("--surface", family, "flat, dome_convex, cylinder_convex, dome_concave, cylinder_concave");
  sim->add_option("--radius-mm", radius, "surface radius (mm)");
  sim->add_option("--pressure", pressures, "supply pressure(s), kPa gauge")->expected(1, -1);
  sim->add_option("--out", sim_out, "CSV output (h_mm,F_N); several pressures get _<P>kPa suffixes");
  sim->add_flag("--friction-elements", friction, "fit the three friction pads");

  // dataset gen
  auto* dataset = app.add_subcommand("dataset", "synthetic experiment datasets");
  dataset->require_subcommand(1);
  auto* gen = dataset->add_subcommand("gen", "run the factorial protocol");
  std::string plan = "reference";
  std::string data_out;
  std::string traces_dir;
  std::optional<double> noise_sd;
  bool gen_augment = false;
  gen->add_option("--plan", plan, "'reference' or a file with plan.* keys");
  gen->add_option("--out", data_out, "dataset CSV")->required();
  gen->add_option("--traces", traces_dir, "directory for per-record force traces");
  gen->add_option("--noise-sd", noise_sd, "repeat noise (fraction)");
  gen->add_flag("--augment", gen_augment, "append the zero-pressure rows");

  // train
  auto* train = app.add_subcommand("train", "fit the forest + boosting surrogate");
  std::string data_in;
  std::string model_path;
  bool no_augment = false;
  train->add_option("--data", data_in, "dataset CSV")->required();
  train->add_option("--out", model_path, "model JSON")->required();
  train->add_flag("--no-augment", no_augment, "do not add zero-pressure rows");

  // cv
  auto* cv = app.add_subcommand("cv", "k-fold cross-validation of the surrogate");
  std::optional<int> folds;
  std::string cv_out;
  cv->add_option("--data", data_in, "dataset CSV")->required();
  cv->add_option("--folds", folds, "number of folds");
  cv->add_option("--out", cv_out, "JSON report");
  cv->add_flag("--no-augment", no_augment, "do not add zero-pressure rows");

  // predict
  auto* pred = app.add_subcommand("predict", "surrogate prediction at one design point");
  double nozzle = 0.6;
  double pressure = 400.0;
  pred->add_option("--model", model_path, "model JSON")->required();
  pred->add_option("--nozzle-mm", nozzle, "nozzle diameter (mm)");
  pred->add_option("--surface", family, "surface family");
  pred->add_option("--radius-mm", radius, "surface radius (mm)");
  pred->add_option("--pressure", pressure, "supply pressure, kPa gauge");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "prediction grid over nozzle diameter and surface radius");
  std::string sweep_family = "dome_convex";
  double dn_min = 0.6, dn_max = 1.0, r_min = 15.0, r_max = 100.0;
  int dn_steps = 21, r_steps = 35;
  std::vector<double> sweep_pressures{400.0};
  std::string sweep_out;
  std::string sweep_csv;
  sweep->add_option("--model", model_path, "model JSON")->required();
  sweep->add_option("--surface", sweep_family, "surface family");
  sweep->add_option("--dn-min", dn_min);
  sweep->add_option("--dn-max", dn_max);
  sweep->add_option("--dn-steps", dn_steps);
  sweep->add_option("--radius-min", r_min);
  sweep->add_option("--radius-max", r_max);
  sweep->add_option("--radius-steps", r_steps);
  sweep->add_option("--pressure", sweep_pressures, "pressure axis, kPa gauge")->expected(1, -1);
  sweep->add_option("--out", sweep_out, "sweep JSON")->required();
  sweep->add_option("--csv", sweep_csv, "also write a long-format CSV");

  // report
  auto* report = app.add_subcommand("report", "per-family F_max tables (radius x pressure) as CSV");
  std::string report_out;
  report->add_option("--data", data_in, "dataset CSV")->required();
  report->add_option("--out", report_out, "CSV output")->required();

  // calibrate
  auto* cal = app.add_subcommand("calibrate", "fit the flow-model constants to the reference trends");
  std::string cal_out;
  std::string cal_report;
  cal->add_option("--out", cal_out, "config file with the fitted constants")->required();
  cal->add_option("--report", cal_report, "JSON residual report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*comp) {
      print_compensation(vg::compensate(vg::ResinMaterial::by_name(material), target_mm, tolerance), json_only);
      return kOk;
    }

    const vg::Config config = g.load();

    if (*sim) {
      vg::GripperGeometry gripper =
          gripper_file.empty() ? vg::preset_gripper(gripper_id) : vg::gripper_from_entries(g.entries_of(gripper_file));
      if (friction) gripper.friction_elements = config.friction;
      vg::SurfaceSpec surface{vg::parse_surface_family(family), radius, config.stiffness};
      if (surface.family == vg::SurfaceFamily::Flat) surface.radius = vg::kFlatRadius;
      for (double p : pressures) {
        const auto curve = vg::lift_curve(gripper, surface, p, config.air, config.aero, config.curve_options());
        std::printf("pressure_kPa=%g F_max_N=%.6f h_opt_mm=%.6f\n", p, curve.f_max, curve.h_opt);
        if (!sim_out.empty()) {
          const std::string path =
              pressures.size() > 1 ? with_suffix(sim_out, "_" + vg::format_double(p) + "kPa") : sim_out;
          vg::write_file_atomic(path, vg::lift_curve_to_csv(curve));
        }
      }
      return kOk;
    }

    if (*gen) {
      const vg::FactorialPlan fp = plan == "reference" ? vg::reference_plan(config.stiffness)
                                                   : vg::plan_from_entries(g.entries_of(plan), config.stiffness);
      auto settings = config.protocol_settings();
      settings.keep_traces = !traces_dir.empty();
      auto ds = vg::generate_dataset(fp, noise_sd.value_or(config.noise_sd), config.seed, settings, g.threads);
      if (gen_augment) ds = vg::augment(ds);
      vg::write_dataset(ds, data_out);
      if (!traces_dir.empty()) vg::write_traces(ds, traces_dir);
      std::printf("records=%zu seed=%llu out=%s\n", ds.records.size(), static_cast<unsigned long long>(config.seed),
                  data_out.c_str());
      return kOk;
    }

    if (*train) {
      const auto ds = prepared(vg::read_dataset(data_in), !no_augment);
      const auto model = vg::fit_ensemble(vg::training_set(ds), config.surrogate, config.seed, g.threads);
      vg::save_model(model, model_path);
      std::printf("rows=%zu trees=%zu stages=%zu out=%s\n", ds.records.size(), model.forest.trees.size(),
                  model.boost.stages.size(), model_path.c_str());
      return kOk;
    }

    if (*cv) {
      const auto ds = prepared(vg::read_dataset(data_in), !no_augment);
      const auto rep =
          vg::cross_validate(vg::training_set(ds), folds.value_or(config.cv_folds), config.surrogate, config.seed, g.threads);
      for (std::size_t i = 0; i < rep.fold_scores.size(); ++i) std::printf("fold %zu R2=%.6f\n", i, rep.fold_scores[i]);
      std::printf("mean R2=%.6f\n", rep.mean_score);
      if (!cv_out.empty()) {
        const json j = {{"k", rep.k}, {"seed", rep.seed}, {"metric", "r2"}, {"fold_scores", rep.fold_scores},
                        {"mean_score", rep.mean_score}, {"fold_of", rep.fold_of}};
        vg::write_file_atomic(cv_out, j.dump(1) + "\n");
      }
      return kOk;
    }

    if (*pred) {
      const auto model = vg::load_model(model_path);
      const vg::FeatureVector f{nozzle, radius, pressure, vg::parse_surface_family(family)};
      const auto x = vg::encode_features(f);
      const double rf = model.predict_forest(x);
      const double ab = model.predict_boost(x);
      std::printf("F_pred_N=%.6f F_pred_RF_N=%.6f F_pred_AB_N=%.6f\n", model.predict(x), rf, ab);
      return kOk;
    }

    if (*sweep) {
      const auto model = vg::load_model(model_path);
      vg::SweepGrid grid;
      grid.family = vg::parse_surface_family(sweep_family);
      grid.nozzle_diameters = vg::linspace(dn_min, dn_max, dn_steps);
      grid.radii = vg::linspace(r_min, r_max, r_steps);
      grid.pressures = sweep_pressures;
      const auto s = vg::sweep_predict(model, grid);
      vg::save_sweep(s, sweep_out);
      if (!sweep_csv.empty()) vg::write_file_atomic(sweep_csv, vg::sweep_to_csv(s));
      std::printf("points=%zu out=%s\n", s.values.size(), sweep_out.c_str());
      return kOk;
    }

    if (*report) {
      const auto ds = vg::read_dataset(data_in);
      // (gripper, family, radius, pressure) -> running sums, kept in
      // canonical order by the map.
      struct Acc {
        double sum = 0.0, sq = 0.0;
        int n = 0;
      };
      std::map<std::tuple<std::string, std::string, double, double>, Acc> acc;
      for (const auto& r : ds.records) {
        const auto& c = r.condition;
        auto& a = acc[{c.gripper_id, std::string(vg::to_string(c.surface.family)), c.surface.radius, c.pressure}];
        a.sum += r.max_lift;
        a.sq += r.max_lift * r.max_lift;
        ++a.n;
      }
      std::string out = "gripper_id,surface_family,radius_mm,pressure_kPa,mean_F_max_N,sd_F_max_N,n\n";
      for (const auto& [k, a] : acc) {
        const double mean = a.sum / a.n;
        const double var = a.n > 1 ? std::max(0.0, (a.sq - a.n * mean * mean) / (a.n - 1)) : 0.0;
        out += std::get<0>(k) + ',' + std::get<1>(k) + ',' + vg::format_double(std::get<2>(k)) + ',' +
               vg::format_double(std::get<3>(k)) + ',' + vg::format_double(mean) + ',' +
               vg::format_double(std::sqrt(var)) + ',' + std::to_string(a.n) + '\n';
      }
      vg::write_file_atomic(report_out, out);
      std::printf("rows=%zu out=%s\n", acc.size(), report_out.c_str());
      return kOk;
    }

    if (*cal) {
      vg::CalibrationOptions opt;
      opt.trends = config.calibration_trend_options(g.threads);
      opt.max_iterations = config.calibration_max_iterations;
      const auto res = vg::calibrate(vg::reference_trend_targets(), config.calibration_bounds, config.air, config.aero, opt);
      vg::Config fitted = config;
      fitted.aero = res.constants;
      vg::write_file_atomic(cal_out, vg::config_to_text(fitted));
      if (!cal_report.empty()) vg::write_file_atomic(cal_report, vg::calibration_to_json(res));
      for (const auto& t : res.residuals)
        std::printf("%-22s target=%-8g achieved=%-10.4f residual=%+.4f\n", std::string(vg::to_string(t.trend)).c_str(),
                    t.target, t.achieved, t.residual);
      const auto p = vg::calibrated_parameters(res.constants);
      for (std::size_t i = 0; i < 4; ++i)
        std::printf("%s = %s\n", vg::calibrated_parameter_names()[i].c_str(), vg::format_double(p[i]).c_str());
      if (!res.converged) {
        std::fprintf(stderr, "calibration did not converge in %d iterations; best-so-far constants written\n",
                     res.iterations);
        return kCalibration;
      }
      return kOk;
    }
  } catch (const vg::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kInternal;
  }
  return kUsage;
}
