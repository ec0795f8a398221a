#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gridlift/image.hpp"
#include "gridlift/pipeline.hpp"
#include "gridlift/sampler.hpp"

namespace gridlift {

inline constexpr std::size_t kNnHistogramBins = 32;

struct CloudStats {
  std::size_t count = 0;
  std::size_t dims = 0;
  std::vector<double> bbox_min;
  std::vector<double> bbox_max;
  std::vector<double> axis_mean;
  std::vector<double> axis_variance;  // population variance
  double mean_nn_distance = 0.0;
  /// Set for single-point clouds, where no neighbor distance exists.
  bool degenerate = false;
  /// Nearest-neighbor distances binned over [0, bbox diagonal].
  std::vector<std::size_t> nn_histogram;
};

/// Exact nearest-neighbor statistics through a k-d tree.
/// Throws EmptyCloud for zero points.
CloudStats cloud_stats(std::span<const double> coords, std::size_t dims);
CloudStats cloud_stats(const DenseCloud& cloud);

/// Splats each point's first feature (divided by max(rows, cols) - 1) onto
/// its nearest pixel, averages multiple hits and fills unhit pixels from the
/// nearest hit pixel. Returns a single-channel grid.
/// Throws EmptyCloud for zero points.
ImageGrid reconstruct_image(const DenseCloud& cloud, std::size_t rows, std::size_t cols);

/// The strategy's first lifted feature as a single-channel grid, which is
/// what reconstruct_image approximates.
ImageGrid feature_image(const ImageGrid& image, const FeatureStrategy& strategy);

/// Mean SSIM over all 8x8 windows (stride 1, uniform weights) with
/// C1 = 0.01^2 and C2 = 0.03^2. Color inputs go through to_grayscale first;
/// images smaller than the window use one window covering the whole grid.
/// Throws DimensionMismatch.
double ssim(const ImageGrid& a, const ImageGrid& b);

/// 10 log10(1 / MSE) over every sample. nullopt marks identical inputs
/// (infinite PSNR). Throws DimensionMismatch.
std::optional<double> psnr(const ImageGrid& a, const ImageGrid& b);

/// Total-variation distance between the lattice histograms of two clouds'
/// source indices, over `lattice_size` bins.
double histogram_tv_distance(const DenseCloud& a, const DenseCloud& b, std::size_t lattice_size);

struct RunSummary {
  std::uint64_t seed = 0;
  std::string checksum;
  double source_ssim = 0.0;  // reconstruction vs feature_image of the input
};

struct PairSummary {
  std::size_t first = 0;
  std::size_t second = 0;
  double ssim = 0.0;         // between the two reconstructions
  double tv_distance = 0.0;  // between lattice histograms
  bool identical_bytes = false;
};

struct RepeatabilityReport {
  std::vector<RunSummary> runs;
  std::vector<PairSummary> pairs;
  double min_pair_ssim = 1.0;
  double max_pair_tv = 0.0;
  /// Every pair of runs sharing a seed produced byte-identical OFF text.
  bool repeated_seeds_identical = true;

  /// Human-readable lines followed by a key=value block.
  std::string to_text() const;
};

/// Runs the pipeline once per seed (in parallel, up to config.workers) and
/// compares the runs pairwise. Throws InvalidArgument for fewer than two
/// seeds; pipeline errors propagate.
RepeatabilityReport repeatability_report(const ImageGrid& image, const ConversionConfig& config,
                                         std::span<const std::uint64_t> seeds);

}  // namespace gridlift
