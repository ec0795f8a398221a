#include <gtest/gtest.h>

#include <fstream>
#include <set>

#include "gridlift/checksum.hpp"
#include "gridlift/error.hpp"
#include "gridlift/off_io.hpp"
#include "gridlift/pipeline.hpp"
#include "support.hpp"

using namespace gridlift;
using namespace testing_support;
namespace fs = std::filesystem;

namespace {

ConversionConfig small_config(std::size_t points = 64) {
  ConversionConfig config;
  config.points = points;
  return config;
}

void make_dataset(const fs::path& root, const std::map<std::string, std::size_t>& classes,
                  std::uint64_t seed = 1, std::size_t size = 8) {
  Gen gen(seed);
  for (const auto& [label, count] : classes) {
    fs::create_directories(root / label);
    for (std::size_t k = 0; k < count; ++k) {
      save_png(random_image(gen, size, size + k % 3, 3, true),
               root / label / ("img" + std::to_string(k) + ".png"));
    }
  }
}

std::map<std::string, std::string> tree_bytes(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& f : fs::recursive_directory_iterator(root)) {
    if (f.is_regular_file()) out[fs::relative(f.path(), root).generic_string()] = slurp(f.path());
  }
  return out;
}

}  // namespace

TEST(ConvertOne, BlackPixelsGiveStableOutput) {
  TempDir dir("convert");
  save_png(constant_image(2, 2, 0.0), dir / "black.png");
  ConversionConfig config = small_config(8);
  config.master_seed = 42;
  const ConversionRecord a = convert_one(dir / "black.png", config, dir / "a.off");
  const ConversionRecord b = convert_one(dir / "black.png", config, dir / "b.off");
  EXPECT_EQ(read_off(dir / "a.off").vertex_count(), 8u);
  EXPECT_EQ(a.points, 8u);
  EXPECT_EQ(a.seed, 42u);
  EXPECT_EQ(a.checksum, b.checksum);
  EXPECT_EQ(a.checksum, sha256_file(dir / "a.off"));
  EXPECT_EQ(a.bytes, fs::file_size(dir / "a.off"));
  std::set<std::string> stages;
  for (const auto& t : a.timings) stages.insert(t.stage);
  EXPECT_EQ(stages, (std::set<std::string>{"config", "ingest", "features", "sparse-cloud", "faces",
                                           "curvature", "densify", "format", "write"}));
}

TEST(ConvertOne, AchromaticStrategiesAgree) {
  TempDir dir("achromatic");
  Gen gen(70);
  std::vector<double> v;
  for (int k = 0; k < 16 * 16; ++k) {
    const double g = static_cast<double>(gen.index(0, 255)) / 255.0;
    v.insert(v.end(), {g, g, g});
  }
  save_png(ImageGrid(16, 16, 3, v), dir / "gray.png");
  ConversionConfig bright = small_config(512);
  bright.strategy.kind = FeatureKind::Brightness;
  ConversionConfig hsv = bright;
  hsv.strategy.kind = FeatureKind::HsvValue;
  convert_one(dir / "gray.png", bright, dir / "bright.off");
  convert_one(dir / "gray.png", hsv, dir / "hsv.off");
  EXPECT_EQ(slurp(dir / "bright.off"), slurp(dir / "hsv.off"));
}

TEST(ConvertOne, ErrorsNameTheirStage) {
  TempDir dir("stages");
  try {
    convert_one(dir / "nope.png", small_config(), dir / "x.off");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::FileNotFound);
    EXPECT_EQ(e.stage(), "ingest");
  }
  save_png(constant_image(3, 3, 0.5), dir / "ok.png");
  try {
    convert_one(dir / "ok.png", small_config(0), dir / "x.off");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidN);
    EXPECT_EQ(e.stage(), "config");
  }
  try {
    convert_one(dir / "ok.png", small_config(), dir / "missing-dir" / "x.off");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IoError);
    EXPECT_EQ(e.stage(), "write");
  }
}

TEST(ConvertOne, MeshEmission) {
  TempDir dir("mesh");
  Gen gen(71);
  save_png(random_image(gen, 5, 6, 3, true), dir / "in.png");
  ConversionConfig config = small_config();
  config.emit = EmitKind::Mesh;
  config.face_kind = FaceKind::Triangle;
  config.strategy.dims = 4;
  const ConversionRecord rec = convert_one(dir / "in.png", config, dir / "mesh.off");
  const OffDocument doc = read_off(dir / "mesh.off");
  EXPECT_EQ(doc.dimension, 4);
  EXPECT_EQ(doc.vertex_count(), 30u);
  EXPECT_EQ(doc.faces.size(), 2u * 4 * 5);
  EXPECT_EQ(rec.points, 30u);
}

TEST(RunPipeline, FaceKindOnlyShowsInMeshOutput) {
  Gen gen(72);
  const ImageGrid img = random_image(gen, 12, 12);
  ConversionConfig square = small_config(256);
  ConversionConfig triangle = square;
  triangle.face_kind = FaceKind::Triangle;
  EXPECT_EQ(run_pipeline(img, square, 3).off_text, run_pipeline(img, triangle, 3).off_text);
  square.emit = triangle.emit = EmitKind::Mesh;
  EXPECT_NE(run_pipeline(img, square, 3).off_text, run_pipeline(img, triangle, 3).off_text);
}

TEST(Manifest, TextRoundTripAndErrors) {
  DatasetManifest m;
  m.entries.push_back({"a/x.png", "a/x.off", "a", 4, 5, 42, "rgb-mean", "square", 2048,
                       "monte-carlo", "cloud", std::string(64, 'f'), "train"});
  m.entries.push_back({"b/y.png", "b/y.off", "b", 7, 7, 43, "rb-4d", "triangle", 16,
                       "poisson-disk", "mesh", std::string(64, '0'), "test"});
  const std::string text = m.to_text();
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "source\toutput\tlabel\trows\tcols\tseed\tstrategy\tfaces\tpoints\tsampler\temit\tchecksum\tsplit");
  EXPECT_EQ(DatasetManifest::parse(text), m);
  EXPECT_EQ(m.class_totals(), (std::map<std::string, std::size_t>{{"a", 1}, {"b", 1}}));

  const auto line_of = [](const std::string& bad) -> std::optional<std::size_t> {
    try {
      DatasetManifest::parse(bad);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::ParseError);
      return e.line();
    }
    return std::nullopt;
  };
  EXPECT_EQ(line_of("source\toutput\n"), 1u);
  std::string broken = text;
  broken.replace(broken.find("\t4\t5\t"), 5, "\tfour\t5\t");
  EXPECT_EQ(line_of(broken), 2u);
}

TEST(ConvertDataset, CountsFilesAndChecksums) {
  TempDir data("dataset"), out("dataset-out");
  make_dataset(data.path(), {{"A", 3}, {"B", 2}});
  const BatchResult result = convert_dataset(data.path(), small_config(), out.path());
  EXPECT_EQ(result.converted, 5u);
  EXPECT_EQ(result.skipped, 0u);
  EXPECT_TRUE(result.failures.empty());
  EXPECT_EQ(result.manifest.class_totals(), (std::map<std::string, std::size_t>{{"A", 3}, {"B", 2}}));

  std::size_t off_files = 0;
  for (const auto& f : fs::recursive_directory_iterator(out.path())) {
    off_files += f.path().extension() == ".off" ? 1 : 0;
  }
  EXPECT_EQ(off_files, 5u);

  const DatasetManifest on_disk = DatasetManifest::read(out / kManifestFileName);
  EXPECT_EQ(on_disk, result.manifest);
  for (std::size_t k = 0; k < on_disk.entries.size(); ++k) {
    const ManifestEntry& e = on_disk.entries[k];
    EXPECT_EQ(e.seed, 42u ^ k);
    EXPECT_EQ(sha256_file(out.path() / e.output), e.checksum);
    EXPECT_EQ(e.rows, 8u);
  }
  EXPECT_EQ(on_disk.entries[0].source, "A/img0.png");
  EXPECT_EQ(on_disk.entries[4].source, "B/img1.png");
}

TEST(ConvertDataset, RerunIsIdempotentAndResumes) {
  TempDir data("resume"), out("resume-out");
  make_dataset(data.path(), {{"cat", 4}, {"dog", 3}});
  convert_dataset(data.path(), small_config(), out.path());
  const auto before = tree_bytes(out.path());

  const BatchResult again = convert_dataset(data.path(), small_config(), out.path());
  EXPECT_EQ(again.converted, 0u);
  EXPECT_EQ(again.skipped, 7u);
  EXPECT_EQ(tree_bytes(out.path()), before);

  std::ofstream(out / "dog/img1.off") << "tampered";
  const BatchResult repaired = convert_dataset(data.path(), small_config(), out.path());
  EXPECT_EQ(repaired.converted, 1u);
  EXPECT_EQ(tree_bytes(out.path()), before);

  ConversionConfig denser = small_config(128);
  EXPECT_EQ(convert_dataset(data.path(), denser, out.path()).converted, 7u);
}

TEST(ConvertDataset, WorkerCountDoesNotChangeOutput) {
  TempDir data("workers"), one("workers-1"), many("workers-8");
  make_dataset(data.path(), {{"x", 6}, {"y", 5}, {"z", 4}});
  ConversionConfig config = small_config(300);
  convert_dataset(data.path(), config, one.path());
  config.workers = 8;
  convert_dataset(data.path(), config, many.path());
  EXPECT_EQ(tree_bytes(one.path()), tree_bytes(many.path()));
}

TEST(ConvertDataset, SplitIsStratifiedAndSeeded) {
  TempDir data("split"), out("split-out"), out2("split-out2");
  make_dataset(data.path(), {{"p", 10}, {"q", 5}}, 2, 3);
  const BatchResult r = convert_dataset(data.path(), small_config(8), out.path());
  std::map<std::string, std::size_t> tests;
  for (const auto& e : r.manifest.entries) {
    EXPECT_TRUE(e.split == "train" || e.split == "test");
    tests[e.label] += e.split == "test" ? 1 : 0;
  }
  EXPECT_EQ(tests["p"], 2u);
  EXPECT_EQ(tests["q"], 1u);
  const BatchResult r2 = convert_dataset(data.path(), small_config(8), out2.path());
  EXPECT_EQ(r.manifest, r2.manifest);
}

TEST(ConvertDataset, FailuresAreReportedWithoutAborting) {
  TempDir data("partial"), out("partial-out");
  make_dataset(data.path(), {{"ok", 2}});
  fs::create_directories(data / "bad");
  std::ofstream(data / "bad" / "broken.png") << "not really a png";
  const BatchResult r = convert_dataset(data.path(), small_config(), out.path());
  EXPECT_EQ(r.converted, 2u);
  ASSERT_EQ(r.failures.size(), 1u);
  EXPECT_EQ(r.failures[0].source, "bad/broken.png");
  EXPECT_EQ(r.failures[0].stage, "ingest");
  EXPECT_EQ(r.manifest.entries.size(), 2u);
}

TEST(ConvertDataset, EmptyRootIsAnError) {
  TempDir data("empty"), out("empty-out");
  fs::create_directories(data / "nothing");
  try {
    convert_dataset(data.path(), small_config(), out.path());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyDataset);
  }
}

TEST(ConvertDataset, TumorDatasetShapeCounts) {
  TempDir data("mri"), out("mri-out");
  const ImageGrid tiny = constant_image(2, 2, 0.2, 1);
  fs::create_directories(data / "no-tumor");
  fs::create_directories(data / "tumor");
  save_png(tiny, data / "seed.png");
  for (int k = 0; k < 2079; ++k) fs::copy_file(data / "seed.png", data / "no-tumor" / (std::to_string(k) + ".png"));
  for (int k = 0; k < 1683; ++k) fs::copy_file(data / "seed.png", data / "tumor" / (std::to_string(k) + ".png"));
  ConversionConfig config = small_config(4);
  config.workers = 4;
  const BatchResult r = convert_dataset(data.path(), config, out.path());
  EXPECT_EQ(r.manifest.class_totals(),
            (std::map<std::string, std::size_t>{{"no-tumor", 2079}, {"tumor", 1683}}));
  EXPECT_EQ(r.manifest.entries.size(), 3762u);
}
