#include "gridlift/quality.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>

#include "gridlift/checksum.hpp"
#include "gridlift/error.hpp"
#include "gridlift/kdtree.hpp"

namespace gridlift {

namespace {

constexpr std::size_t kSsimWindow = 8;
constexpr double kSsimC1 = 0.01 * 0.01;
constexpr double kSsimC2 = 0.03 * 0.03;

void require_same_shape(const ImageGrid& a, const ImageGrid& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch,
                std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " vs " +
                    std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
}

}  // namespace

CloudStats cloud_stats(std::span<const double> coords, std::size_t dims) {
  if (dims == 0 || coords.size() % dims != 0) {
    throw Error(ErrorCode::InvalidArgument, "coordinate count is not a multiple of dims");
  }
  const std::size_t count = coords.size() / dims;
  if (count == 0) throw Error(ErrorCode::EmptyCloud, "cloud has no points");

  CloudStats stats;
  stats.count = count;
  stats.dims = dims;
  stats.bbox_min.assign(coords.begin(), coords.begin() + static_cast<std::ptrdiff_t>(dims));
  stats.bbox_max = stats.bbox_min;
  stats.axis_mean.assign(dims, 0.0);
  stats.axis_variance.assign(dims, 0.0);
  for (std::size_t k = 0; k < count; ++k) {
    for (std::size_t a = 0; a < dims; ++a) {
      const double v = coords[k * dims + a];
      stats.bbox_min[a] = std::min(stats.bbox_min[a], v);
      stats.bbox_max[a] = std::max(stats.bbox_max[a], v);
      stats.axis_mean[a] += v;
    }
  }
  for (double& m : stats.axis_mean) m /= static_cast<double>(count);
  for (std::size_t k = 0; k < count; ++k) {
    for (std::size_t a = 0; a < dims; ++a) {
      const double d = coords[k * dims + a] - stats.axis_mean[a];
      stats.axis_variance[a] += d * d;
    }
  }
  for (double& v : stats.axis_variance) v /= static_cast<double>(count);

  stats.nn_histogram.assign(kNnHistogramBins, 0);
  if (count == 1) {
    stats.degenerate = true;
    stats.nn_histogram[0] = 1;
    return stats;
  }

  double diagonal2 = 0.0;
  for (std::size_t a = 0; a < dims; ++a) {
    const double e = stats.bbox_max[a] - stats.bbox_min[a];
    diagonal2 += e * e;
  }
  const double diagonal = std::sqrt(diagonal2);

  const KdTree tree(coords, dims);
  double total = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    const double d = std::sqrt(tree.nearest(coords.subspan(k * dims, dims), k).distance2);
    total += d;
    std::size_t bin = 0;
    if (diagonal > 0.0) {
      bin = std::min(kNnHistogramBins - 1,
                     static_cast<std::size_t>(d / diagonal * static_cast<double>(kNnHistogramBins)));
    }
    ++stats.nn_histogram[bin];
  }
  stats.mean_nn_distance = total / static_cast<double>(count);
  return stats;
}

CloudStats cloud_stats(const DenseCloud& cloud) {
  return cloud_stats(cloud.coords, static_cast<std::size_t>(cloud.dims));
}

ImageGrid reconstruct_image(const DenseCloud& cloud, std::size_t rows, std::size_t cols) {
  if (cloud.size() == 0) throw Error(ErrorCode::EmptyCloud, "cloud has no points");
  if (cloud.dims < 3) throw Error(ErrorCode::InvalidDims, "reconstruction needs a feature axis");
  if (rows == 0 || cols == 0) throw Error(ErrorCode::InvalidArgument, "empty target grid");

  const double scale = static_cast<double>(std::max(rows, cols) - 1);
  const auto last_row = static_cast<long>(rows - 1);
  const auto last_col = static_cast<long>(cols - 1);
  std::vector<double> sum(rows * cols, 0.0);
  std::vector<std::size_t> hits(rows * cols, 0);
  for (std::size_t k = 0; k < cloud.size(); ++k) {
    const auto p = cloud.point(k);
    const long col = std::clamp(std::lround(p[0]), 0L, last_col);
    const long row = std::clamp(last_row - std::lround(p[1]), 0L, last_row);
    const double value = scale > 0.0 ? std::clamp(p[2] / scale, 0.0, 1.0) : 0.0;
    const std::size_t idx = static_cast<std::size_t>(row) * cols + static_cast<std::size_t>(col);
    sum[idx] += value;
    ++hits[idx];
  }

  std::vector<double> values(rows * cols, 0.0);
  std::vector<double> hit_coords;
  std::vector<std::size_t> hit_pixels;
  for (std::size_t idx = 0; idx < values.size(); ++idx) {
    if (hits[idx] == 0) continue;
    values[idx] = sum[idx] / static_cast<double>(hits[idx]);
    hit_pixels.push_back(idx);
    hit_coords.push_back(static_cast<double>(idx / cols));
    hit_coords.push_back(static_cast<double>(idx % cols));
  }
  if (hit_pixels.size() < values.size()) {
    const KdTree tree(hit_coords, 2);
    for (std::size_t idx = 0; idx < values.size(); ++idx) {
      if (hits[idx] != 0) continue;
      const double q[2] = {static_cast<double>(idx / cols), static_cast<double>(idx % cols)};
      values[idx] = values[hit_pixels[tree.nearest(q).index]];
    }
  }
  return ImageGrid(rows, cols, 1, std::move(values), "reconstruction");
}

ImageGrid feature_image(const ImageGrid& image, const FeatureStrategy& strategy) {
  const FeatureField field = extract_features(image, strategy);
  std::vector<double> values(image.rows() * image.cols());
  for (std::size_t i = 0; i < image.rows(); ++i) {
    for (std::size_t j = 0; j < image.cols(); ++j) values[i * image.cols() + j] = field.at(i, j, 0);
  }
  return ImageGrid(image.rows(), image.cols(), 1, std::move(values), image.source_id());
}

double ssim(const ImageGrid& a_in, const ImageGrid& b_in) {
  require_same_shape(a_in, b_in);
  const ImageGrid a = to_grayscale(a_in);
  const ImageGrid b = to_grayscale(b_in);
  const std::size_t wr = std::min(kSsimWindow, a.rows());
  const std::size_t wc = std::min(kSsimWindow, a.cols());
  const double n = static_cast<double>(wr * wc);

  double total = 0.0;
  std::size_t windows = 0;
  for (std::size_t i0 = 0; i0 + wr <= a.rows(); ++i0) {
    for (std::size_t j0 = 0; j0 + wc <= a.cols(); ++j0) {
      double mu_a = 0.0;
      double mu_b = 0.0;
      for (std::size_t i = i0; i < i0 + wr; ++i) {
        for (std::size_t j = j0; j < j0 + wc; ++j) {
          mu_a += a.at(i, j, 0);
          mu_b += b.at(i, j, 0);
        }
      }
      mu_a /= n;
      mu_b /= n;
      double var_a = 0.0;
      double var_b = 0.0;
      double cov = 0.0;
      for (std::size_t i = i0; i < i0 + wr; ++i) {
        for (std::size_t j = j0; j < j0 + wc; ++j) {
          const double da = a.at(i, j, 0) - mu_a;
          const double db = b.at(i, j, 0) - mu_b;
          var_a += da * da;
          var_b += db * db;
          cov += da * db;
        }
      }
      var_a /= n;
      var_b /= n;
      cov /= n;
      total += ((2.0 * mu_a * mu_b + kSsimC1) * (2.0 * cov + kSsimC2)) /
               ((mu_a * mu_a + mu_b * mu_b + kSsimC1) * (var_a + var_b + kSsimC2));
      ++windows;
    }
  }
  return total / static_cast<double>(windows);
}

std::optional<double> psnr(const ImageGrid& a, const ImageGrid& b) {
  require_same_shape(a, b);
  if (a.channels() != b.channels()) {
    throw Error(ErrorCode::DimensionMismatch, "channel counts differ");
  }
  double sse = 0.0;
  const auto va = a.values();
  const auto vb = b.values();
  for (std::size_t k = 0; k < va.size(); ++k) {
    const double d = va[k] - vb[k];
    sse += d * d;
  }
  if (sse == 0.0) return std::nullopt;
  const double mse = sse / static_cast<double>(va.size());
  return 10.0 * std::log10(1.0 / mse);
}

double histogram_tv_distance(const DenseCloud& a, const DenseCloud& b, std::size_t lattice_size) {
  if (a.source_index.empty() || b.source_index.empty()) {
    throw Error(ErrorCode::EmptyCloud, "histogram of an empty cloud");
  }
  std::vector<double> ha(lattice_size, 0.0);
  std::vector<double> hb(lattice_size, 0.0);
  for (std::size_t k : a.source_index) ha.at(k) += 1.0;
  for (std::size_t k : b.source_index) hb.at(k) += 1.0;
  const double na = static_cast<double>(a.source_index.size());
  const double nb = static_cast<double>(b.source_index.size());
  double tv = 0.0;
  for (std::size_t k = 0; k < lattice_size; ++k) tv += std::abs(ha[k] / na - hb[k] / nb);
  return 0.5 * tv;
}

std::string RepeatabilityReport::to_text() const {
  std::ostringstream out;
  out.precision(9);
  for (std::size_t r = 0; r < runs.size(); ++r) {
    out << "run " << r << " seed=" << runs[r].seed << " sha256=" << runs[r].checksum
        << " source_ssim=" << runs[r].source_ssim << '\n';
  }
  for (const auto& p : pairs) {
    out << "pair " << p.first << "," << p.second << " ssim=" << p.ssim
        << " tv=" << p.tv_distance << " identical=" << (p.identical_bytes ? "yes" : "no") << '\n';
  }
  out << "runs=" << runs.size() << '\n'
      << "pairs=" << pairs.size() << '\n'
      << "min_pair_ssim=" << min_pair_ssim << '\n'
      << "max_pair_tv=" << max_pair_tv << '\n'
      << "repeated_seeds_identical=" << (repeated_seeds_identical ? "true" : "false") << '\n';
  return out.str();
}

RepeatabilityReport repeatability_report(const ImageGrid& image, const ConversionConfig& config,
                                         std::span<const std::uint64_t> seeds) {
  if (seeds.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least two seeds");
  config.validate();

  struct Run {
    PipelineResult result;
    ImageGrid reconstruction;
  };
  const auto run_seed = [&](std::uint64_t seed) {
    PipelineResult result = run_pipeline(image, config, seed);
    ImageGrid recon = reconstruct_image(result.cloud, image.rows(), image.cols());
    return Run{std::move(result), std::move(recon)};
  };

  std::vector<Run> runs;
  runs.reserve(seeds.size());
  const std::size_t batch = std::max<std::size_t>(1, config.workers);
  for (std::size_t start = 0; start < seeds.size(); start += batch) {
    std::vector<std::future<Run>> pending;
    for (std::size_t s = start; s < std::min(seeds.size(), start + batch); ++s) {
      pending.push_back(std::async(std::launch::async, run_seed, seeds[s]));
    }
    for (auto& f : pending) runs.push_back(f.get());
  }

  const ImageGrid source = feature_image(image, config.strategy);
  const std::size_t lattice = image.rows() * image.cols();
  RepeatabilityReport report;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    report.runs.push_back({seeds[r], sha256_hex(runs[r].result.off_text),
                           ssim(runs[r].reconstruction, source)});
  }
  for (std::size_t i = 0; i < runs.size(); ++i) {
    for (std::size_t j = i + 1; j < runs.size(); ++j) {
      PairSummary pair;
      pair.first = i;
      pair.second = j;
      pair.ssim = ssim(runs[i].reconstruction, runs[j].reconstruction);
      pair.tv_distance = histogram_tv_distance(runs[i].result.cloud, runs[j].result.cloud, lattice);
      pair.identical_bytes = runs[i].result.off_text == runs[j].result.off_text;
      report.min_pair_ssim = std::min(report.min_pair_ssim, pair.ssim);
      report.max_pair_tv = std::max(report.max_pair_tv, pair.tv_distance);
      if (seeds[i] == seeds[j] && !pair.identical_bytes) report.repeated_seeds_identical = false;
      report.pairs.push_back(pair);
    }
  }
  return report;
}

}  // namespace gridlift
