#pragma once

#include <filesystem>
#include <string>

#include "vortexgrip/aero.hpp"
#include "vortexgrip/calibration.hpp"
#include "vortexgrip/ensemble.hpp"
#include "vortexgrip/protocol.hpp"

namespace vortexgrip {

inline constexpr int kDatasetVersion = 1;
inline constexpr int kModelVersion = 1;
inline constexpr int kSweepVersion = 1;

inline constexpr const char* kDatasetHeader =
    "gripper_id,d_n_mm,d_g_mm,d_c_mm,h_c_mm,pressure_kPa,surface_family,radius_mm,rep,F_max_N,h_opt_mm,seed";

/// Writes via a sibling temporary file and a rename, so readers never see a
/// partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

std::string dataset_to_csv(const Dataset& dataset);
Dataset dataset_from_csv(const std::string& text);
void write_dataset(const Dataset& dataset, const std::filesystem::path& path);
Dataset read_dataset(const std::filesystem::path& path);

std::string trace_to_csv(const ForceTrace& trace);
/// One trace file per record, named record_<index>.csv, in `directory`.
void write_traces(const Dataset& dataset, const std::filesystem::path& directory);

std::string lift_curve_to_csv(const LiftCurve& curve);

std::string model_to_json(const EnsembleModel& model);
EnsembleModel model_from_json(const std::string& text);
void save_model(const EnsembleModel& model, const std::filesystem::path& path);
EnsembleModel load_model(const std::filesystem::path& path);

std::string sweep_to_json(const SweepSurface& sweep);
SweepSurface sweep_from_json(const std::string& text);
std::string sweep_to_csv(const SweepSurface& sweep);
void save_sweep(const SweepSurface& sweep, const std::filesystem::path& path);
SweepSurface load_sweep(const std::filesystem::path& path);

std::string calibration_to_json(const CalibrationResult& result);

}  // namespace vortexgrip
