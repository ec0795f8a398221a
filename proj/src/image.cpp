#include "gridlift/image.hpp"

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>

#include "gridlift/error.hpp"

namespace gridlift {

namespace {

enum class Signature { Png, Jpeg, Bmp, Unknown };

Signature sniff(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::array<unsigned char, 8> head{};
  in.read(reinterpret_cast<char*>(head.data()), head.size());
  const auto got = static_cast<std::size_t>(in.gcount());
  constexpr std::array<unsigned char, 8> kPng{0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
  if (got >= 8 && head == kPng) return Signature::Png;
  if (got >= 3 && head[0] == 0xFF && head[1] == 0xD8 && head[2] == 0xFF) return Signature::Jpeg;
  if (got >= 2 && head[0] == 'B' && head[1] == 'M') return Signature::Bmp;
  return Signature::Unknown;
}

}  // namespace

ImageGrid::ImageGrid(std::size_t rows, std::size_t cols, std::size_t channels,
                     std::vector<double> values, std::string source_id)
    : rows_(rows),
      cols_(cols),
      channels_(channels),
      values_(std::move(values)),
      source_id_(std::move(source_id)) {
  if (rows_ == 0 || cols_ == 0) {
    throw Error(ErrorCode::InvalidArgument, "image grid must be at least 1x1");
  }
  if (channels_ != 1 && channels_ != 3) {
    throw Error(ErrorCode::InvalidArgument, "image grid needs 1 or 3 channels");
  }
  if (values_.size() != rows_ * cols_ * channels_) {
    throw Error(ErrorCode::InvalidArgument, "image grid value count mismatch");
  }
  for (double v : values_) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw Error(ErrorCode::InvalidArgument, "image values must lie in [0, 1]");
    }
  }
}

ImageGrid load_image(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorCode::FileNotFound, path.string());
  }
  if (sniff(path) == Signature::Unknown) {
    throw Error(ErrorCode::UnsupportedFormat, path.string());
  }

  cv::Mat raw;
  try {
    raw = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  } catch (const cv::Exception& e) {
    throw Error(ErrorCode::CorruptImage, path.string() + ": " + e.what());
  }
  if (raw.empty()) throw Error(ErrorCode::CorruptImage, path.string());

  double divisor = 0.0;
  switch (raw.depth()) {
    case CV_8U: divisor = 255.0; break;
    case CV_16U: divisor = 65535.0; break;
    default:
      throw Error(ErrorCode::UnsupportedFormat,
                  path.string() + ": only 8- and 16-bit samples are supported");
  }

  const auto rows = static_cast<std::size_t>(raw.rows);
  const auto cols = static_cast<std::size_t>(raw.cols);
  const int source_channels = raw.channels();
  // OpenCV stores color as BGR(A); gray+alpha arrives as 2 channels.
  const std::size_t channels = source_channels >= 3 ? 3 : 1;

  cv::Mat wide;
  raw.convertTo(wide, CV_64F);

  std::vector<double> values(rows * cols * channels);
  for (std::size_t i = 0; i < rows; ++i) {
    const double* row = wide.ptr<double>(static_cast<int>(i));
    for (std::size_t j = 0; j < cols; ++j) {
      const double* px = row + j * static_cast<std::size_t>(source_channels);
      double* out = &values[(i * cols + j) * channels];
      if (channels == 3) {
        out[0] = px[2] / divisor;
        out[1] = px[1] / divisor;
        out[2] = px[0] / divisor;
      } else {
        out[0] = px[0] / divisor;
      }
    }
  }
  return ImageGrid(rows, cols, channels, std::move(values), path.string());
}

void save_png(const ImageGrid& image, const std::filesystem::path& path) {
  const int type = image.channels() == 3 ? CV_8UC3 : CV_8UC1;
  cv::Mat out(static_cast<int>(image.rows()), static_cast<int>(image.cols()), type);
  for (std::size_t i = 0; i < image.rows(); ++i) {
    auto* row = out.ptr<unsigned char>(static_cast<int>(i));
    for (std::size_t j = 0; j < image.cols(); ++j) {
      for (std::size_t c = 0; c < image.channels(); ++c) {
        // BGR on disk.
        const std::size_t dst = image.channels() == 3 ? 2 - c : 0;
        row[j * image.channels() + dst] =
            static_cast<unsigned char>(std::lround(image.at(i, j, c) * 255.0));
      }
    }
  }
  bool ok = false;
  try {
    ok = cv::imwrite(path.string(), out);
  } catch (const cv::Exception& e) {
    throw Error(ErrorCode::IoError, path.string() + ": " + e.what());
  }
  if (!ok) throw Error(ErrorCode::IoError, path.string());
}

ImageGrid to_grayscale(const ImageGrid& image) {
  if (image.channels() == 1) return image;
  std::vector<double> gray(image.rows() * image.cols());
  for (std::size_t i = 0; i < image.rows(); ++i) {
    for (std::size_t j = 0; j < image.cols(); ++j) {
      const double r = image.at(i, j, 0);
      const double g = image.at(i, j, 1);
      const double b = image.at(i, j, 2);
      // Rounding may push a convex combination an ulp outside its inputs.
      gray[i * image.cols() + j] = std::clamp(0.299 * r + 0.587 * g + 0.114 * b,
                                              std::min({r, g, b}), std::max({r, g, b}));
    }
  }
  return ImageGrid(image.rows(), image.cols(), 1, std::move(gray), image.source_id());
}

}  // namespace gridlift
