// gridlift: grid images to OFF point clouds and meshes.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "gridlift/checksum.hpp"
#include "gridlift/error.hpp"
#include "gridlift/image.hpp"
#include "gridlift/off_io.hpp"
#include "gridlift/pipeline.hpp"
#include "gridlift/quality.hpp"

namespace fs = std::filesystem;
using namespace gridlift;

namespace {

struct ConfigFlags {
  std::string strategy = "rgb-mean";
  int dims = 3;
  std::string faces = "square";
  std::size_t points = 2048;
  std::uint64_t seed = 42;
  std::string sampler = "monte-carlo";
  std::string emit = "cloud";
  unsigned workers = 1;

  ConversionConfig build() const {
    ConversionConfig config;
    config.strategy.kind = parse_feature_kind(strategy);
    config.strategy.dims = dims;
    config.face_kind = parse_face_kind(faces);
    config.points = points;
    config.master_seed = seed;
    config.sampler = parse_sampler_mode(sampler);
    config.emit = parse_emit_kind(emit);
    config.workers = workers;
    config.validate();
    return config;
  }
};

void add_config_flags(CLI::App* cmd, ConfigFlags& flags) {
  cmd->add_option("--strategy", flags.strategy, "feature lift")
      ->check(CLI::IsMember({"rgb-mean", "fourier", "brightness", "grayscale", "hsv-v"}))
      ->capture_default_str();
  cmd->add_option("--dims", flags.dims, "point dimension")
      ->check(CLI::IsMember({3, 4, 5}))
      ->capture_default_str();
  cmd->add_option("--faces", flags.faces, "face kind")
      ->check(CLI::IsMember({"triangle", "square"}))
      ->capture_default_str();
  cmd->add_option("--points", flags.points, "sampled point count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--seed", flags.seed, "master seed")->envname("GRIDLIFT_SEED")->capture_default_str();
  cmd->add_option("--sampler", flags.sampler, "sampling mode")
      ->check(CLI::IsMember({"monte-carlo", "poisson-disk"}))
      ->capture_default_str();
  cmd->add_option("--emit", flags.emit, "write the dense cloud or the lattice mesh")
      ->check(CLI::IsMember({"cloud", "mesh"}))
      ->capture_default_str();
  cmd->add_option("--workers", flags.workers, "parallel workers")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void report_error(const Error& e) {
  std::cerr << "error: " << e.what() << '\n';
}

int run_convert(const fs::path& input, const fs::path& output, const ConfigFlags& flags) {
  const ConversionRecord rec = convert_one(input, flags.build(), output);
  std::cout << "output=" << rec.output.string() << '\n'
            << "rows=" << rec.rows << '\n'
            << "cols=" << rec.cols << '\n'
            << "points=" << rec.points << '\n'
            << "seed=" << rec.seed << '\n'
            << "bytes=" << rec.bytes << '\n'
            << "sha256=" << rec.checksum << '\n';
  for (const auto& t : rec.timings) std::cout << "time." << t.stage << '=' << t.seconds << '\n';
  return 0;
}

int run_batch(const fs::path& root, const fs::path& out_root, const ConfigFlags& flags) {
  const BatchResult result = convert_dataset(root, flags.build(), out_root);
  std::cout << "converted=" << result.converted << '\n'
            << "skipped=" << result.skipped << '\n'
            << "failed=" << result.failures.size() << '\n';
  for (const auto& [label, total] : result.manifest.class_totals()) {
    std::cout << "class." << label << '=' << total << '\n';
  }
  for (const auto& f : result.failures) {
    std::cerr << "failed " << f.source << " [" << f.stage << "]: " << f.message << '\n';
  }
  return result.failures.empty() ? 0 : 2;
}

int run_stats(const fs::path& path) {
  const OffDocument doc = read_off(path);
  const CloudStats s = cloud_stats(doc.vertices, static_cast<std::size_t>(doc.dimension));
  std::cout.precision(9);
  std::cout << "count=" << s.count << '\n' << "dims=" << s.dims << '\n';
  for (std::size_t a = 0; a < s.dims; ++a) {
    std::cout << "axis" << a << ".min=" << s.bbox_min[a] << '\n'
              << "axis" << a << ".max=" << s.bbox_max[a] << '\n'
              << "axis" << a << ".mean=" << s.axis_mean[a] << '\n'
              << "axis" << a << ".variance=" << s.axis_variance[a] << '\n';
  }
  std::cout << "mean_nn_distance=" << s.mean_nn_distance << '\n'
            << "degenerate=" << (s.degenerate ? "true" : "false") << '\n'
            << "nn_histogram=";
  for (std::size_t b = 0; b < s.nn_histogram.size(); ++b) {
    std::cout << (b ? "," : "") << s.nn_histogram[b];
  }
  std::cout << '\n';
  return 0;
}

int run_inspect(const fs::path& path) {
  const OffDocument doc = read_off(path);
  std::map<std::size_t, std::size_t> arity;
  for (const auto& f : doc.faces) ++arity[f.size()];
  std::cout << "header=" << (doc.n_dialect() ? "nOFF" : "OFF") << '\n'
            << "dimension=" << doc.dimension << '\n'
            << "vertices=" << doc.vertex_count() << '\n'
            << "faces=" << doc.faces.size() << '\n'
            << "edges=" << doc.edge_count << '\n';
  for (const auto& [k, count] : arity) std::cout << "faces." << k << "-gon=" << count << '\n';
  return 0;
}

int verify_manifest(const fs::path& out_root) {
  const DatasetManifest manifest = DatasetManifest::read(out_root / kManifestFileName);
  std::size_t bad = 0;
  for (const auto& e : manifest.entries) {
    const fs::path file = out_root / e.output;
    std::string actual;
    try {
      actual = sha256_file(file);
    } catch (const Error&) {
      actual = "missing";
    }
    if (actual != e.checksum) {
      ++bad;
      std::cerr << "mismatch " << e.output << '\n';
    }
  }
  std::cout << "entries=" << manifest.entries.size() << '\n' << "mismatched=" << bad << '\n';
  return bad == 0 ? 0 : 1;
}

int verify_image(const fs::path& input, const ConfigFlags& flags,
                 const std::vector<std::uint64_t>& seeds, const std::string& report_path) {
  const RepeatabilityReport report = repeatability_report(load_image(input), flags.build(), seeds);
  const std::string text = report.to_text();
  std::cout << text;
  if (!report_path.empty()) {
    std::ofstream out(report_path, std::ios::binary);
    out << text;
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + report_path);
  }
  return report.repeated_seeds_identical ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lift grid images into OFF point clouds and meshes"};
  app.require_subcommand(1);

  ConfigFlags flags;
  std::string input;
  std::string output;

  auto* convert = app.add_subcommand("convert", "convert one image");
  convert->add_option("input", input, "image file")->required();
  convert->add_option("--out", output, "output OFF path")->required();
  add_config_flags(convert, flags);

  auto* batch = app.add_subcommand("batch", "convert a folder-per-class dataset");
  batch->add_option("root", input, "dataset root")->required();
  batch->add_option("--out", output, "output root")->required();
  add_config_flags(batch, flags);

  auto* stats = app.add_subcommand("stats", "point statistics of an OFF file");
  stats->add_option("file", input, "OFF or nOFF file")->required()->check(CLI::ExistingFile);

  auto* inspect = app.add_subcommand("inspect", "print an OFF header summary");
  inspect->add_option("file", input, "OFF or nOFF file")->required()->check(CLI::ExistingFile);

  std::vector<std::uint64_t> seeds{1, 2};
  std::string report_path;
  auto* verify = app.add_subcommand(
      "verify", "compare runs across seeds, or check a batch output against its manifest");
  verify->add_option("target", input, "image file or batch output root")->required();
  verify->add_option("--seeds", seeds, "seeds to compare")->delimiter(',')->capture_default_str();
  verify->add_option("--out", report_path, "also write the report here");
  add_config_flags(verify, flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*convert) return run_convert(input, output, flags);
    if (*batch) return run_batch(input, output, flags);
    if (*stats) return run_stats(input);
    if (*inspect) return run_inspect(input);
    if (*verify) {
      if (fs::is_directory(input)) return verify_manifest(input);
      return verify_image(input, flags, seeds, report_path);
    }
  } catch (const Error& e) {
    report_error(e);
    return 1;
  }
  return 0;
}
