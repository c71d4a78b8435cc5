#include <gtest/gtest.h>

#include <filesystem>
#include <string>

#include "random_instances.hpp"
#include "vortexgrip/dataset_io.hpp"
#include "vortexgrip/error.hpp"

using namespace vortexgrip;
using vortexgrip::testing::random_dataset;
using vortexgrip::testing::random_model;
using vortexgrip::testing::random_sweep;
using vortexgrip::testing::same_csv_fields;

namespace {

const std::filesystem::path kData = VORTEXGRIP_TEST_DATA;

std::string header_block() {
  return std::string("# vortexgrip-dataset version=1 provenance=synthetic\n") + kDatasetHeader + "\n";
}

template <class F>
std::string error_text(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("vg_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST(DatasetIo, EmptyDatasetIsHeaderOnly) {
  const std::string text = dataset_to_csv(Dataset{});
  EXPECT_EQ(text, header_block());
  const Dataset back = dataset_from_csv(text);
  EXPECT_TRUE(back.records.empty());
  EXPECT_EQ(back.provenance, Provenance::Synthetic);
}

TEST(DatasetIo, BareHeaderReadsAsExternal) {
  const Dataset ds = dataset_from_csv(std::string(kDatasetHeader) + "\nG1,0.6,20,14,4,100,flat,1000000,0,1,0.2,7\n");
  ASSERT_EQ(ds.records.size(), 1u);
  EXPECT_EQ(ds.provenance, Provenance::External);
  EXPECT_EQ(ds.records[0].seed, 7u);
}

TEST(DatasetIo, MissingColumnNamesLine) {
  const std::string text = header_block() + "G1,0.6,20,14,4,100,flat,1000000,0,1,0.2,7\n" +
                           "G1,0.6,20,14,4,100,flat,1000000,0,1,0.2\n";
  const std::string msg = error_text([&] { dataset_from_csv(text); });
  EXPECT_NE(msg.find("line 4"), std::string::npos) << msg;
  EXPECT_THROW(dataset_from_csv(text), ParseError);
}

TEST(DatasetIo, BadValuesRejected) {
  for (const std::string row : {"G1,0.6,20,14,4,1e2x,flat,1000000,0,1,0.2,7", "G1,0.6,20,14,4,100,sphere,20,0,1,0.2,7",
                                "G1,0.6,20,14,4,100,flat,1000000,0.5,1,0.2,7", "G1,0.6,20,14,4,100,flat,1000000,0,1,0.2,-7",
                                ",0.6,20,14,4,100,flat,1000000,0,1,0.2,7", "G1,0.6,20,14,4,,flat,1000000,0,1,0.2,7"}) {
    EXPECT_THROW(dataset_from_csv(header_block() + row + "\n"), ParseError) << row;
  }
}

TEST(DatasetIo, HeaderAndVersionChecks) {
  EXPECT_THROW(dataset_from_csv(""), SchemaMismatch);
  EXPECT_THROW(dataset_from_csv("gripper,d_n\n"), SchemaMismatch);
  EXPECT_THROW(dataset_from_csv("# some other tool\n" + std::string(kDatasetHeader) + "\n"), SchemaMismatch);
  EXPECT_THROW(dataset_from_csv("# vortexgrip-dataset version=2 provenance=synthetic\n" + std::string(kDatasetHeader) +
                                "\n"),
               VersionUnsupported);
  EXPECT_THROW(dataset_from_csv("# vortexgrip-dataset provenance=synthetic\n" + std::string(kDatasetHeader) + "\n"),
               ParseError);
}

TEST(DatasetIo, CrlfRejected) {
  std::string text = header_block();
  text.insert(text.size() - 1, "\r");
  EXPECT_THROW(dataset_from_csv(text), ParseError);
}

TEST(DatasetIo, RandomDatasetsRoundTrip) {
  Rng rng(2024);
  for (int i = 0; i < 100; ++i) {
    const Dataset ds = random_dataset(rng);
    const std::string text = dataset_to_csv(ds);
    const Dataset back = dataset_from_csv(text);
    ASSERT_TRUE(same_csv_fields(ds, back)) << "instance " << i;
    ASSERT_EQ(dataset_to_csv(back), text);
  }
}

TEST(DatasetIo, RandomModelsRoundTrip) {
  Rng rng(77);
  for (int i = 0; i < 100; ++i) {
    const EnsembleModel m = random_model(rng);
    const std::string text = model_to_json(m);
    const EnsembleModel back = model_from_json(text);
    ASSERT_TRUE(back == m) << "instance " << i;
    ASSERT_EQ(model_to_json(back), text);
  }
}

TEST(DatasetIo, RandomSweepsRoundTrip) {
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const SweepSurface s = random_sweep(rng);
    const SweepSurface back = sweep_from_json(sweep_to_json(s));
    ASSERT_TRUE(back == s) << "instance " << i;
  }
}

TEST(DatasetIo, GoldenDatasetFixture) {
  const std::string text = read_file(kData / "golden_dataset.csv");
  const Dataset ds = dataset_from_csv(text);
  ASSERT_EQ(ds.records.size(), 3u);
  EXPECT_EQ(ds.records[0].condition.surface.family, SurfaceFamily::Flat);
  EXPECT_EQ(ds.records[0].max_lift, 0.9342711804419133);
  EXPECT_EQ(ds.records[0].seed, 1234567890123456789u);
  EXPECT_EQ(ds.records[1].condition.gripper.nozzle_diameter, 0.8);
  EXPECT_EQ(ds.records[1].condition.surface.radius, 35.0);
  EXPECT_EQ(ds.records[1].condition.repetition, 3);
  EXPECT_EQ(ds.records[2].condition.surface.family, SurfaceFamily::CylinderConcave);
  EXPECT_EQ(ds.records[2].seed, 18446744073709551615u);
  EXPECT_EQ(dataset_to_csv(ds), text);
}

TEST(DatasetIo, GoldenSweepFixture) {
  const SweepSurface s = load_sweep(kData / "golden_sweep.json");
  EXPECT_EQ(s.family, SurfaceFamily::DomeConvex);
  ASSERT_EQ(s.values.size(), 6u);
  EXPECT_EQ(s.at(0, 1, 1), 4.125);
  EXPECT_EQ(s.at(0, 0, 2), 2.0);
  EXPECT_EQ(sweep_from_json(sweep_to_json(s)), s);
}

TEST(DatasetIo, ModelErrors) {
  Rng rng(9);
  const std::string good = model_to_json(random_model(rng));
  EXPECT_THROW(model_from_json("{not json"), ParseError);
  EXPECT_THROW(model_from_json(R"({"format":"something-else","version":1})"), SchemaMismatch);

  std::string future = good;
  future.replace(future.find("\"version\": 1"), 12, "\"version\": 9");
  EXPECT_THROW(model_from_json(future), VersionUnsupported);

  std::string renamed = good;
  renamed.replace(renamed.find("pressure_kPa"), 12, "pressure_bar");
  EXPECT_THROW(model_from_json(renamed), SchemaMismatch);

  EXPECT_THROW(sweep_from_json(R"({"format":"vortexgrip-sweep","version":1,"surface_family":"flat",
    "axes":{"pressure_kPa":[1],"nozzle_diameter_mm":[1,2],"radius_mm":[3]},"values":[1]})"),
               ParseError);
}

TEST(DatasetIo, AtomicWriteLeavesNoTemporaries) {
  TempDir dir;
  Rng rng(3);
  const Dataset ds = random_dataset(rng);
  write_dataset(ds, dir.path / "d.csv");
  EXPECT_TRUE(same_csv_fields(read_dataset(dir.path / "d.csv"), ds));
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir.path)) ++files;
  EXPECT_EQ(files, 1u);
  EXPECT_THROW(write_dataset(ds, dir.path / "missing" / "d.csv"), IoError);
  EXPECT_THROW(read_dataset(dir.path / "nope.csv"), IoError);
}

TEST(DatasetIo, TracesWrittenPerRecord) {
  TempDir dir;
  Dataset ds;
  ExperimentRecord r;
  r.trace.samples = {{0.0, 0.0, 0.1}, {0.5, 1.25, 0.75}};
  ds.records = {r, r};
  write_traces(ds, dir.path / "traces");
  EXPECT_EQ(read_file(dir.path / "traces" / "record_1.csv"), "t_s,h_mm,Fz_N\n0,0,0.1\n0.5,1.25,0.75\n");
}
