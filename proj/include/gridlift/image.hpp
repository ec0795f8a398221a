#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace gridlift {

/// Row-major raster with values normalized to [0, 1].
///
/// Row 0 is the top image row. Color grids carry three channels in (R, G, B)
/// order; grayscale grids carry one. Immutable after construction.
class ImageGrid {
 public:
  /// Throws InvalidArgument if the shape is empty, the channel count is not
  /// 1 or 3, the value count does not match, or a value leaves [0, 1].
  ImageGrid(std::size_t rows, std::size_t cols, std::size_t channels,
            std::vector<double> values, std::string source_id = {});

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t channels() const noexcept { return channels_; }
  const std::string& source_id() const noexcept { return source_id_; }
  std::span<const double> values() const noexcept { return values_; }

  double at(std::size_t row, std::size_t col, std::size_t channel) const {
    return values_[(row * cols_ + col) * channels_ + channel];
  }

  /// Channel c of a color pixel; on grayscale grids every c reads channel 0.
  double rgb(std::size_t row, std::size_t col, std::size_t c) const {
    return channels_ == 1 ? values_[row * cols_ + col] : at(row, col, c);
  }

  bool operator==(const ImageGrid& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ &&
           channels_ == other.channels_ && values_ == other.values_;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::size_t channels_;
  std::vector<double> values_;
  std::string source_id_;
};

/// Decodes a PNG, JPEG or BMP file. 8-bit samples are divided by 255 (16-bit
/// by 65535); alpha is dropped.
///
/// Errors: FileNotFound, UnsupportedFormat (unrecognized signature),
/// CorruptImage (the decoder rejected the data).
ImageGrid load_image(const std::filesystem::path& path);

/// Writes an 8-bit PNG, rounding each value to the nearest 1/255 step.
/// Reloading with load_image reproduces grids whose values are multiples of
/// 1/255 exactly.
void save_png(const ImageGrid& image, const std::filesystem::path& path);

/// BT.601 luma 0.299 R + 0.587 G + 0.114 B. Single-channel grids are
/// returned unchanged.
ImageGrid to_grayscale(const ImageGrid& image);

}  // namespace gridlift
