#include "gridlift/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <chrono>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "gridlift/checksum.hpp"
#include "gridlift/error.hpp"
#include "gridlift/off_io.hpp"

namespace gridlift {

namespace fs = std::filesystem;

namespace {

constexpr const char* kManifestColumns[] = {"source",  "output", "label",    "rows",
                                            "cols",    "seed",   "strategy", "faces",
                                            "points",  "sampler", "emit",    "checksum",
                                            "split"};
constexpr std::size_t kManifestColumnCount = std::size(kManifestColumns);
constexpr double kTestFraction = 0.2;

class StageClock {
 public:
  explicit StageClock(std::vector<StageTiming>& sink) : sink_(sink) {}

  template <typename Fn>
  auto run(const char* stage, Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    try {
      if constexpr (std::is_void_v<decltype(fn())>) {
        fn();
        record(stage, start);
      } else {
        auto value = fn();
        record(stage, start);
        return value;
      }
    } catch (const Error& e) {
      if (!e.stage().empty()) throw;
      throw e.with_stage(stage);
    }
  }

 private:
  void record(const char* stage, std::chrono::steady_clock::time_point start) {
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    sink_.push_back({stage, elapsed.count()});
  }

  std::vector<StageTiming>& sink_;
};

// SplitMix64 finalizer; only used to order entries for the split column.
std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

bool is_image_file(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".bmp";
}

template <typename Int>
Int parse_field(const std::string& text, const char* column, std::size_t line) {
  Int v{};
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw Error(ErrorCode::ParseError,
                std::string("manifest column ") + column + " is not an integer: '" + text + "'",
                line);
  }
  return v;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    out.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

struct Job {
  fs::path source;      // absolute or as given
  std::string relative;  // relative to the dataset root
  std::string label;
  std::string output;    // relative to the output root
};

std::vector<Job> discover(const fs::path& root) {
  std::vector<Job> jobs;
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw Error(ErrorCode::EmptyDataset, root.string() + " is not a directory");
  }
  for (const auto& class_dir : fs::directory_iterator(root)) {
    if (!class_dir.is_directory()) continue;
    const std::string label = class_dir.path().filename().string();
    std::vector<fs::path> files;
    for (const auto& f : fs::directory_iterator(class_dir.path())) {
      if (f.is_regular_file() && is_image_file(f.path())) files.push_back(f.path());
    }
    std::sort(files.begin(), files.end());
    std::set<std::string> stems;
    for (const auto& f : files) {
      std::string name = f.stem().string() + ".off";
      // a.png and a.jpg in one class would collide on a.off
      if (!stems.insert(name).second) name = f.filename().string() + ".off";
      jobs.push_back({f, fs::relative(f, root).generic_string(), label, label + "/" + name});
    }
  }
  std::sort(jobs.begin(), jobs.end(),
            [](const Job& a, const Job& b) { return a.relative < b.relative; });
  return jobs;
}

void assign_splits(std::vector<ManifestEntry>& entries, std::uint64_t master_seed) {
  std::map<std::string, std::vector<std::size_t>> by_class;
  for (std::size_t k = 0; k < entries.size(); ++k) by_class[entries[k].label].push_back(k);
  for (auto& [label, members] : by_class) {
    std::vector<std::pair<std::uint64_t, std::size_t>> keyed;
    for (std::size_t k : members) keyed.emplace_back(mix64(master_seed ^ mix64(entries[k].seed)), k);
    std::sort(keyed.begin(), keyed.end());
    const auto test_count = static_cast<std::size_t>(
        std::lround(kTestFraction * static_cast<double>(members.size())));
    for (std::size_t r = 0; r < keyed.size(); ++r) {
      entries[keyed[r].second].split = r < test_count ? "test" : "train";
    }
  }
}

}  // namespace

std::string to_string(EmitKind kind) { return kind == EmitKind::Mesh ? "mesh" : "cloud"; }

EmitKind parse_emit_kind(const std::string& name) {
  if (name == "cloud") return EmitKind::DenseCloud;
  if (name == "mesh") return EmitKind::Mesh;
  throw Error(ErrorCode::InvalidArgument, "unknown emit kind '" + name + "'");
}

void ConversionConfig::validate() const {
  strategy.validate();
  if (points == 0) throw Error(ErrorCode::InvalidN, "point count must be positive");
  if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  if (!(delta > 0.0)) throw Error(ErrorCode::InvalidArgument, "delta must be positive");
  if (workers == 0) throw Error(ErrorCode::InvalidArgument, "workers must be positive");
}

PipelineResult run_pipeline(const ImageGrid& image, const ConversionConfig& config,
                            std::uint64_t seed) {
  config.validate();
  std::vector<StageTiming> timings;
  StageClock clock(timings);

  FeatureField features =
      clock.run("features", [&] { return extract_features(image, config.strategy); });
  SparseCloud sparse =
      clock.run("sparse-cloud", [&] { return build_sparse_cloud(features, config.strategy); });
  SurfaceMesh mesh =
      clock.run("faces", [&] { return build_faces(std::move(sparse), config.face_kind); });
  CurvatureField curvature = clock.run("curvature", [&] {
    return surface_curvature(mesh.cloud, CurvatureOptions{config.epsilon, config.formula});
  });
  DenseCloud cloud = clock.run("densify", [&] {
    return densify(mesh, curvature, config.points, seed, config.sampler, config.delta);
  });
  std::string text = clock.run("format", [&] {
    return config.emit == EmitKind::Mesh ? format_off(to_off_document(mesh))
                                         : format_off(to_off_document(cloud));
  });
  return PipelineResult{std::move(mesh), std::move(curvature), std::move(cloud), std::move(text),
                        std::move(timings)};
}

ConversionRecord convert_one(const fs::path& input, const ConversionConfig& config,
                             const fs::path& output) {
  std::vector<StageTiming> timings;
  StageClock clock(timings);
  clock.run("config", [&] { config.validate(); });
  const ImageGrid image = clock.run("ingest", [&] { return load_image(input); });
  PipelineResult result = run_pipeline(image, config, config.master_seed);
  timings.insert(timings.end(), result.timings.begin(), result.timings.end());

  clock.run("write", [&] {
    std::ofstream out(output, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot open " + output.string());
    out.write(result.off_text.data(), static_cast<std::streamsize>(result.off_text.size()));
    out.close();
    if (!out) throw Error(ErrorCode::IoError, "failed writing " + output.string());
  });

  ConversionRecord record;
  record.input = input;
  record.output = output;
  record.rows = image.rows();
  record.cols = image.cols();
  record.points = config.emit == EmitKind::Mesh ? result.mesh.cloud.size() : result.cloud.size();
  record.seed = config.master_seed;
  record.checksum = sha256_hex(result.off_text);
  record.bytes = result.off_text.size();
  record.timings = std::move(timings);
  return record;
}

std::map<std::string, std::size_t> DatasetManifest::class_totals() const {
  std::map<std::string, std::size_t> totals;
  for (const auto& e : entries) ++totals[e.label];
  return totals;
}

std::string DatasetManifest::to_text() const {
  std::ostringstream out;
  for (std::size_t c = 0; c < kManifestColumnCount; ++c) {
    out << (c ? "\t" : "") << kManifestColumns[c];
  }
  out << '\n';
  for (const auto& e : entries) {
    out << e.source << '\t' << e.output << '\t' << e.label << '\t' << e.rows << '\t' << e.cols
        << '\t' << e.seed << '\t' << e.strategy << '\t' << e.faces << '\t' << e.points << '\t'
        << e.sampler << '\t' << e.emit << '\t' << e.checksum << '\t' << e.split << '\n';
  }
  return out.str();
}

DatasetManifest DatasetManifest::parse(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, "empty manifest", 1);
  const auto header = split_tabs(line);
  if (header.size() != kManifestColumnCount ||
      !std::equal(header.begin(), header.end(), std::begin(kManifestColumns))) {
    throw Error(ErrorCode::ParseError, "unexpected manifest header", 1);
  }
  DatasetManifest manifest;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_tabs(line);
    if (f.size() != kManifestColumnCount) {
      throw Error(ErrorCode::ParseError, "manifest row has " + std::to_string(f.size()) +
                                             " columns", line_no);
    }
    ManifestEntry e;
    e.source = f[0];
    e.output = f[1];
    e.label = f[2];
    e.rows = parse_field<std::size_t>(f[3], "rows", line_no);
    e.cols = parse_field<std::size_t>(f[4], "cols", line_no);
    e.seed = parse_field<std::uint64_t>(f[5], "seed", line_no);
    e.strategy = f[6];
    e.faces = f[7];
    e.points = parse_field<std::size_t>(f[8], "points", line_no);
    e.sampler = f[9];
    e.emit = f[10];
    e.checksum = f[11];
    e.split = f[12];
    manifest.entries.push_back(std::move(e));
  }
  return manifest;
}

DatasetManifest DatasetManifest::read(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void DatasetManifest::write(const fs::path& path) const {
  const std::string text = to_text();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

BatchResult convert_dataset(const fs::path& root, const ConversionConfig& config,
                            const fs::path& out_root) {
  config.validate();
  const std::vector<Job> jobs = discover(root);
  if (jobs.empty()) throw Error(ErrorCode::EmptyDataset, "no images under " + root.string());

  std::map<std::string, ManifestEntry> previous;
  const fs::path manifest_path = out_root / kManifestFileName;
  std::error_code ec;
  if (fs::is_regular_file(manifest_path, ec)) {
    try {
      for (auto& e : DatasetManifest::read(manifest_path).entries) previous[e.output] = e;
    } catch (const Error&) {
      previous.clear();  // unreadable ledger: convert everything again
    }
  }

  struct Outcome {
    std::optional<ManifestEntry> entry;
    std::optional<BatchFailure> failure;
    bool skipped = false;
  };
  std::vector<Outcome> outcomes(jobs.size());

  const auto process = [&](std::size_t ordinal) {
    const Job& job = jobs[ordinal];
    ManifestEntry entry;
    entry.source = job.relative;
    entry.output = job.output;
    entry.label = job.label;
    entry.seed = config.master_seed ^ static_cast<std::uint64_t>(ordinal);
    entry.strategy = config.strategy.label();
    entry.faces = to_string(config.face_kind);
    entry.points = config.points;
    entry.sampler = to_string(config.sampler);
    entry.emit = to_string(config.emit);

    const fs::path out_path = out_root / job.output;
    if (auto it = previous.find(job.output); it != previous.end()) {
      const ManifestEntry& old = it->second;
      std::error_code exists_ec;
      if (old.source == entry.source && old.label == entry.label && old.seed == entry.seed &&
          old.strategy == entry.strategy && old.faces == entry.faces &&
          old.points == entry.points && old.sampler == entry.sampler && old.emit == entry.emit &&
          fs::is_regular_file(out_path, exists_ec) && sha256_file(out_path) == old.checksum) {
        outcomes[ordinal].entry = old;
        outcomes[ordinal].skipped = true;
        return;
      }
    }

    try {
      fs::create_directories(out_path.parent_path());
      ConversionConfig per_image = config;
      per_image.master_seed = entry.seed;
      const ConversionRecord record = convert_one(job.source, per_image, out_path);
      entry.rows = record.rows;
      entry.cols = record.cols;
      entry.checksum = record.checksum;
      outcomes[ordinal].entry = std::move(entry);
    } catch (const Error& e) {
      outcomes[ordinal].failure = BatchFailure{job.relative, e.stage(), e.what()};
    } catch (const std::exception& e) {
      outcomes[ordinal].failure = BatchFailure{job.relative, "", e.what()};
    }
  };

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t k = next++; k < jobs.size(); k = next++) process(k);
  };
  const unsigned threads = std::min<unsigned>(config.workers, static_cast<unsigned>(jobs.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  BatchResult result;
  for (auto& outcome : outcomes) {
    if (outcome.entry) {
      result.manifest.entries.push_back(std::move(*outcome.entry));
      (outcome.skipped ? result.skipped : result.converted) += 1;
    } else if (outcome.failure) {
      result.failures.push_back(std::move(*outcome.failure));
    }
  }
  assign_splits(result.manifest.entries, config.master_seed);
  fs::create_directories(out_root);
  result.manifest.write(manifest_path);
  return result;
}

}  // namespace gridlift
