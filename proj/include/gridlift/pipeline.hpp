#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "gridlift/curvature.hpp"
#include "gridlift/features.hpp"
#include "gridlift/image.hpp"
#include "gridlift/mesh.hpp"
#include "gridlift/sampler.hpp"

namespace gridlift {

/// What convert writes: the sampled cloud (no faces) or the lattice mesh.
enum class EmitKind { DenseCloud, Mesh };

/// "cloud" or "mesh".
std::string to_string(EmitKind kind);
EmitKind parse_emit_kind(const std::string& name);

struct ConversionConfig {
  FeatureStrategy strategy;
  FaceKind face_kind = FaceKind::Square;
  std::size_t points = 2048;
  SamplerMode sampler = SamplerMode::MonteCarlo;
  std::uint64_t master_seed = 42;
  double epsilon = kDefaultCurvatureEpsilon;
  double delta = kDefaultDensityFloor;
  CurvatureFormula formula = CurvatureFormula::GradientNormalized;
  EmitKind emit = EmitKind::DenseCloud;
  unsigned workers = 1;

  /// Throws InvalidN, InvalidDims or InvalidArgument.
  void validate() const;
};

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

/// Everything one image produces, in memory.
struct PipelineResult {
  SurfaceMesh mesh;
  CurvatureField curvature;
  DenseCloud cloud;
  std::string off_text;
  std::vector<StageTiming> timings;
};

/// features -> sparse cloud -> faces -> curvature -> densify -> OFF text.
/// Errors carry the failing stage name (Error::stage()).
PipelineResult run_pipeline(const ImageGrid& image, const ConversionConfig& config,
                            std::uint64_t seed);

struct ConversionRecord {
  std::filesystem::path input;
  std::filesystem::path output;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t points = 0;
  std::uint64_t seed = 0;
  std::string checksum;  // SHA-256 of the written bytes
  std::size_t bytes = 0;
  std::vector<StageTiming> timings;  // includes "ingest" and "write"
};

/// Converts one image with seed = config.master_seed.
ConversionRecord convert_one(const std::filesystem::path& input, const ConversionConfig& config,
                             const std::filesystem::path& output);

inline constexpr const char* kManifestFileName = "manifest.tsv";

/// One converted image. Paths are relative ('/'-separated): `source` to the
/// dataset root, `output` to the output root.
struct ManifestEntry {
  std::string source;
  std::string output;
  std::string label;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::uint64_t seed = 0;
  std::string strategy;
  std::string faces;
  std::size_t points = 0;
  std::string sampler;
  std::string emit;
  std::string checksum;
  std::string split;  // "train" or "test"

  bool operator==(const ManifestEntry&) const = default;
};

/// Tab-separated ledger with a header row, one entry per line, in ordinal
/// order.
struct DatasetManifest {
  std::vector<ManifestEntry> entries;

  std::map<std::string, std::size_t> class_totals() const;
  std::string to_text() const;
  /// Throws ParseError on a malformed header or row.
  static DatasetManifest parse(const std::string& text);
  static DatasetManifest read(const std::filesystem::path& path);
  void write(const std::filesystem::path& path) const;

  bool operator==(const DatasetManifest&) const = default;
};

struct BatchFailure {
  std::string source;
  std::string stage;
  std::string message;
};

struct BatchResult {
  DatasetManifest manifest;
  std::size_t converted = 0;
  std::size_t skipped = 0;
  std::vector<BatchFailure> failures;
};

/// Converts every PNG/JPEG/BMP under root/<class>/ into out_root/<class>/.
///
/// Images are ordered by relative path; image k (0-based) uses seed
/// master_seed XOR k. Entries whose output already exists with the checksum
/// and settings recorded in an existing manifest are skipped. Failed images
/// are reported in `failures` and left out of the manifest. Within each
/// class a seeded 20% of entries are marked "test".
///
/// Throws EmptyDataset when no images are found.
BatchResult convert_dataset(const std::filesystem::path& root, const ConversionConfig& config,
                            const std::filesystem::path& out_root);

}  // namespace gridlift
