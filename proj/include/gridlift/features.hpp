#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "gridlift/image.hpp"

namespace gridlift {

enum class FeatureKind { RgbMean, Fourier, Brightness, Grayscale, HsvValue };

/// Single-channel lifts that map each pixel independently.
enum class ChannelKind { Brightness, Grayscale, HsvValue };

/// How pixel color becomes trailing coordinates.
///
/// dims == 3 lifts one feature chosen by `kind`. dims 4 and 5 ignore `kind`
/// and append raw channels: (R, B) and (R, G, B) respectively.
struct FeatureStrategy {
  FeatureKind kind = FeatureKind::RgbMean;
  int dims = 3;

  /// Throws InvalidDims unless dims is 3, 4 or 5.
  void validate() const;
  /// Stable short name, e.g. "rgb-mean", "hsv-v", "rb-4d", "rgb-5d".
  std::string label() const;

  bool operator==(const FeatureStrategy&) const = default;
};

/// Parses the command-line names rgb-mean|fourier|brightness|grayscale|hsv-v.
FeatureKind parse_feature_kind(const std::string& name);
std::string to_string(FeatureKind kind);

/// m x n x depth lattice of lifted feature values.
class FeatureField {
 public:
  FeatureField(std::size_t rows, std::size_t cols, std::size_t depth);
  FeatureField(std::size_t rows, std::size_t cols, std::size_t depth,
               std::vector<double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t depth() const noexcept { return depth_; }
  std::span<const double> values() const noexcept { return values_; }

  double at(std::size_t row, std::size_t col, std::size_t channel = 0) const {
    return values_[(row * cols_ + col) * depth_ + channel];
  }
  double& at(std::size_t row, std::size_t col, std::size_t channel = 0) {
    return values_[(row * cols_ + col) * depth_ + channel];
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::size_t depth_;
  std::vector<double> values_;
};

/// (R + G + B) / 3 per pixel.
FeatureField z_rgb_mean(const ImageGrid& image);

/// Per-channel 2D DFT magnitude combined across channels:
/// z(i, j) = sqrt(sum_C |F_C(i, j)|^2), evaluated at frequency bin (i, j).
/// No compression or normalization.
FeatureField z_fourier_raw(const ImageGrid& image);

/// z_fourier_raw followed by log1p compression and per-image min-max
/// normalization to [0, 1]. A field with zero spread maps to all zeros.
FeatureField z_fourier(const ImageGrid& image);

/// Grayscale: BT.601 luma. Brightness: HSP sqrt(.299 R^2 + .587 G^2 + .114 B^2).
/// HsvValue: max(R, G, B).
FeatureField z_channel(const ImageGrid& image, ChannelKind kind);

/// Raw channel copies: dims 4 -> (R, B), dims 5 -> (R, G, B).
/// Throws InvalidDims for any other dims.
FeatureField lift_multidim(const ImageGrid& image, int dims);

/// Dispatches on the strategy; the result has depth dims - 2.
FeatureField extract_features(const ImageGrid& image, const FeatureStrategy& strategy);

}  // namespace gridlift
