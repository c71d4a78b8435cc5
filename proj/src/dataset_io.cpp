#include "vortexgrip/dataset_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>
#include <unistd.h>

#include "vortexgrip/config.hpp"
#include "vortexgrip/error.hpp"

namespace vortexgrip {

using nlohmann::json;

namespace {

constexpr const char* kDatasetTag = "# vortexgrip-dataset";
constexpr std::size_t kDatasetColumns = 12;

std::string provenance_name(Provenance p) { return p == Provenance::Synthetic ? "synthetic" : "external"; }

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

template <class T>
T parse_field(const std::string& text, int line, const char* column) {
  T v{};
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (text.empty() || res.ec != std::errc() || res.ptr != end)
    throw ParseError("line " + std::to_string(line) + ": bad value '" + text + "' in column " + column);
  return v;
}

json tree_to_json(const RegressionTree& t) {
  json feature = json::array(), threshold = json::array(), left = json::array(), right = json::array(),
       value = json::array();
  for (const auto& n : t.nodes()) {
    feature.push_back(n.feature);
    threshold.push_back(n.threshold);
    left.push_back(n.left);
    right.push_back(n.right);
    value.push_back(n.value);
  }
  return {{"feature", feature}, {"threshold", threshold}, {"left", left}, {"right", right}, {"value", value}};
}

RegressionTree tree_from_json(const json& j) {
  const auto& f = j.at("feature");
  const std::size_t n = f.size();
  for (const char* k : {"threshold", "left", "right", "value"})
    if (j.at(k).size() != n) throw ParseError("tree arrays have inconsistent lengths");
  std::vector<TreeNode> nodes(n);
  for (std::size_t i = 0; i < n; ++i) {
    nodes[i].feature = f[i].get<int>();
    nodes[i].threshold = j["threshold"][i].get<double>();
    nodes[i].left = j["left"][i].get<int>();
    nodes[i].right = j["right"][i].get<int>();
    nodes[i].value = j["value"][i].get<double>();
    if (nodes[i].feature >= 0) {
      const auto l = nodes[i].left;
      const auto r = nodes[i].right;
      if (l <= static_cast<int>(i) || r <= static_cast<int>(i) || l >= static_cast<int>(n) || r >= static_cast<int>(n))
        throw ParseError("tree node " + std::to_string(i) + " has invalid children");
    }
  }
  return RegressionTree(std::move(nodes));
}

void check_header(const json& j, const char* format, int version) {
  if (!j.is_object() || j.value("format", std::string()) != format)
    throw SchemaMismatch(std::string("not a ") + format + " file");
  const int v = j.at("version").get<int>();
  if (v != version) throw VersionUnsupported(std::string(format) + " version " + std::to_string(v) + " is not supported");
}

template <class F>
auto parse_json_guarded(const std::string& text, F&& f) {
  try {
    return f(json::parse(text));
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  const auto parent = path.parent_path();
  if (!parent.empty() && !std::filesystem::exists(parent))
    throw IoError("directory does not exist: " + parent.string());
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw IoError("write failed for " + path.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into place: " + path.string());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string dataset_to_csv(const Dataset& ds) {
  std::string out = std::string(kDatasetTag) + " version=" + std::to_string(ds.schema_version) +
                    " provenance=" + provenance_name(ds.provenance) + "\n" + kDatasetHeader + "\n";
  for (const auto& r : ds.records) {
    const auto& c = r.condition;
    out += c.gripper_id + ',' + format_double(c.gripper.nozzle_diameter) + ',' +
           format_double(c.gripper.gripper_diameter) + ',' + format_double(c.gripper.cavity_diameter) + ',' +
           format_double(c.gripper.cavity_height) + ',' + format_double(c.pressure) + ',' +
           std::string(to_string(c.surface.family)) + ',' + format_double(c.surface.radius) + ',' +
           std::to_string(c.repetition) + ',' + format_double(r.max_lift) + ',' + format_double(r.h_opt) + ',' +
           std::to_string(r.seed) + '\n';
  }
  return out;
}

Dataset dataset_from_csv(const std::string& text) {
  Dataset ds;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  auto next = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++line_no;
    if (!line.empty() && line.back() == '\r') throw ParseError("line " + std::to_string(line_no) + ": CRLF line ending");
    return true;
  };
  if (!next()) throw SchemaMismatch("empty file: missing dataset header");
  if (line.rfind("#", 0) == 0) {
    if (line.rfind(kDatasetTag, 0) != 0) throw SchemaMismatch("line 1: not a vortexgrip dataset");
    std::istringstream meta(line.substr(std::string(kDatasetTag).size()));
    std::string kv;
    bool have_version = false;
    while (meta >> kv) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = kv.substr(0, eq);
      const std::string val = kv.substr(eq + 1);
      if (key == "version") {
        ds.schema_version = parse_field<int>(val, line_no, "version");
        have_version = true;
      } else if (key == "provenance") {
        if (val == "synthetic") ds.provenance = Provenance::Synthetic;
        else if (val == "external") ds.provenance = Provenance::External;
        else throw ParseError("line 1: unknown provenance '" + val + "'");
      }
    }
    if (!have_version) throw ParseError("line 1: missing version");
    if (ds.schema_version != kDatasetVersion)
      throw VersionUnsupported("dataset version " + std::to_string(ds.schema_version) + " is not supported");
    if (!next()) throw SchemaMismatch("missing dataset header");
  } else {
    ds.provenance = Provenance::External;
  }
  if (line != kDatasetHeader) throw SchemaMismatch("line " + std::to_string(line_no) + ": unexpected header '" + line + "'");

  while (next()) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != kDatasetColumns)
      throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(kDatasetColumns) +
                       " columns, got " + std::to_string(f.size()));
    ExperimentRecord r;
    auto& c = r.condition;
    c.gripper_id = f[0];
    if (c.gripper_id.empty()) throw ParseError("line " + std::to_string(line_no) + ": empty gripper_id");
    c.gripper.nozzle_diameter = parse_field<double>(f[1], line_no, "d_n_mm");
    c.gripper.gripper_diameter = parse_field<double>(f[2], line_no, "d_g_mm");
    c.gripper.cavity_diameter = parse_field<double>(f[3], line_no, "d_c_mm");
    c.gripper.cavity_height = parse_field<double>(f[4], line_no, "h_c_mm");
    c.pressure = parse_field<double>(f[5], line_no, "pressure_kPa");
    try {
      c.surface.family = parse_surface_family(f[6]);
    } catch (const InvalidArgument&) {
      throw ParseError("line " + std::to_string(line_no) + ": unknown surface family '" + f[6] + "'");
    }
    c.surface.radius = parse_field<double>(f[7], line_no, "radius_mm");
    c.repetition = parse_field<int>(f[8], line_no, "rep");
    r.max_lift = parse_field<double>(f[9], line_no, "F_max_N");
    r.h_opt = parse_field<double>(f[10], line_no, "h_opt_mm");
    r.seed = parse_field<std::uint64_t>(f[11], line_no, "seed");
    ds.records.push_back(std::move(r));
  }
  return ds;
}

void write_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  write_file_atomic(path, dataset_to_csv(dataset));
}

Dataset read_dataset(const std::filesystem::path& path) { return dataset_from_csv(read_file(path)); }

std::string trace_to_csv(const ForceTrace& trace) {
  std::string out = "t_s,h_mm,Fz_N\n";
  for (const auto& s : trace.samples)
    out += format_double(s.time) + ',' + format_double(s.height) + ',' + format_double(s.force) + '\n';
  return out;
}

void write_traces(const Dataset& dataset, const std::filesystem::path& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw IoError("cannot create trace directory " + directory.string());
  for (std::size_t i = 0; i < dataset.records.size(); ++i)
    write_file_atomic(directory / ("record_" + std::to_string(i) + ".csv"), trace_to_csv(dataset.records[i].trace));
}

std::string lift_curve_to_csv(const LiftCurve& curve) {
  std::string out = "h_mm,F_N\n";
  for (const auto& s : curve.samples) out += format_double(s.height) + ',' + format_double(s.force) + '\n';
  return out;
}

std::string model_to_json(const EnsembleModel& m) {
  json forest_trees = json::array();
  for (const auto& t : m.forest.trees) forest_trees.push_back(tree_to_json(t));
  json stages = json::array();
  for (const auto& t : m.boost.stages) stages.push_back(tree_to_json(t));
  const auto& fp = m.params.forest;
  const auto& bp = m.params.boost;
  json j = {
      {"format", "vortexgrip-model"},
      {"version", kModelVersion},
      {"schema", m.schema},
      {"seed", m.seed},
      {"params",
       {{"forest",
         {{"n_trees", fp.n_trees},
          {"max_depth", fp.max_depth},
          {"min_samples_leaf", fp.min_samples_leaf},
          {"feature_fraction", fp.feature_fraction},
          {"bootstrap", fp.bootstrap}}},
        {"boost",
         {{"n_stages", bp.n_stages},
          {"max_depth", bp.max_depth},
          {"min_samples_leaf", bp.min_samples_leaf},
          {"loss", std::string(to_string(bp.loss))}}}}},
      {"forest", {{"trees", forest_trees}}},
      {"boost", {{"stages", stages}, {"weights", m.boost.stage_weights}}},
  };
  return j.dump(1) + "\n";
}

EnsembleModel model_from_json(const std::string& text) {
  return parse_json_guarded(text, [](const json& j) {
    check_header(j, "vortexgrip-model", kModelVersion);
    EnsembleModel m;
    m.schema = j.at("schema").get<std::vector<std::string>>();
    if (m.schema != feature_schema()) throw SchemaMismatch("model feature schema does not match this build");
    m.seed = j.at("seed").get<std::uint64_t>();
    const auto& fp = j.at("params").at("forest");
    m.params.forest.n_trees = fp.at("n_trees").get<int>();
    m.params.forest.max_depth = fp.at("max_depth").get<int>();
    m.params.forest.min_samples_leaf = fp.at("min_samples_leaf").get<int>();
    m.params.forest.feature_fraction = fp.at("feature_fraction").get<double>();
    m.params.forest.bootstrap = fp.at("bootstrap").get<bool>();
    const auto& bp = j.at("params").at("boost");
    m.params.boost.n_stages = bp.at("n_stages").get<int>();
    m.params.boost.max_depth = bp.at("max_depth").get<int>();
    m.params.boost.min_samples_leaf = bp.at("min_samples_leaf").get<int>();
    try {
      m.params.boost.loss = parse_boost_loss(bp.at("loss").get<std::string>());
    } catch (const InvalidArgument& e) {
      throw ParseError(e.what());
    }
    for (const auto& t : j.at("forest").at("trees")) m.forest.trees.push_back(tree_from_json(t));
    for (const auto& t : j.at("boost").at("stages")) m.boost.stages.push_back(tree_from_json(t));
    m.boost.stage_weights = j.at("boost").at("weights").get<std::vector<double>>();
    if (m.boost.stage_weights.size() != m.boost.stages.size())
      throw ParseError("boost stage weights do not match the stage count");
    return m;
  });
}

void save_model(const EnsembleModel& model, const std::filesystem::path& path) {
  write_file_atomic(path, model_to_json(model));
}

EnsembleModel load_model(const std::filesystem::path& path) { return model_from_json(read_file(path)); }

std::string sweep_to_json(const SweepSurface& s) {
  json j = {
      {"format", "vortexgrip-sweep"},
      {"version", kSweepVersion},
      {"surface_family", std::string(to_string(s.family))},
      {"layout", "values[pressure][nozzle_diameter][radius]"},
      {"axes", {{"pressure_kPa", s.pressures}, {"nozzle_diameter_mm", s.nozzle_diameters}, {"radius_mm", s.radii}}},
      {"values", s.values},
  };
  return j.dump(1) + "\n";
}

SweepSurface sweep_from_json(const std::string& text) {
  return parse_json_guarded(text, [](const json& j) {
    check_header(j, "vortexgrip-sweep", kSweepVersion);
    SweepSurface s;
    try {
      s.family = parse_surface_family(j.at("surface_family").get<std::string>());
    } catch (const InvalidArgument& e) {
      throw ParseError(e.what());
    }
    const auto& axes = j.at("axes");
    s.pressures = axes.at("pressure_kPa").get<std::vector<double>>();
    s.nozzle_diameters = axes.at("nozzle_diameter_mm").get<std::vector<double>>();
    s.radii = axes.at("radius_mm").get<std::vector<double>>();
    s.values = j.at("values").get<std::vector<double>>();
    if (s.values.size() != s.pressures.size() * s.nozzle_diameters.size() * s.radii.size())
      throw ParseError("sweep value count does not match the axes");
    return s;
  });
}

std::string sweep_to_csv(const SweepSurface& s) {
  std::string out = "surface_family,pressure_kPa,d_n_mm,radius_mm,F_pred_N\n";
  for (std::size_t p = 0; p < s.pressures.size(); ++p)
    for (std::size_t d = 0; d < s.nozzle_diameters.size(); ++d)
      for (std::size_t r = 0; r < s.radii.size(); ++r)
        out += std::string(to_string(s.family)) + ',' + format_double(s.pressures[p]) + ',' +
               format_double(s.nozzle_diameters[d]) + ',' + format_double(s.radii[r]) + ',' +
               format_double(s.at(p, d, r)) + '\n';
  return out;
}

void save_sweep(const SweepSurface& sweep, const std::filesystem::path& path) {
  write_file_atomic(path, sweep_to_json(sweep));
}

SweepSurface load_sweep(const std::filesystem::path& path) { return sweep_from_json(read_file(path)); }

std::string calibration_to_json(const CalibrationResult& r) {
  json residuals = json::array();
  for (const auto& t : r.residuals)
    residuals.push_back({{"trend", std::string(to_string(t.trend))},
                         {"target", t.target},
                         {"achieved", t.achieved},
                         {"relative_residual", t.residual}});
  const auto p = calibrated_parameters(r.constants);
  json constants = json::object();
  for (std::size_t i = 0; i < 4; ++i) constants[calibrated_parameter_names()[i]] = p[i];
  json j = {{"format", "vortexgrip-calibration"},
            {"version", 1},
            {"converged", r.converged},
            {"iterations", r.iterations},
            {"evaluations", r.evaluations},
            {"cost", r.cost},
            {"constants", constants},
            {"residuals", residuals}};
  return j.dump(1) + "\n";
}

}  // namespace vortexgrip
