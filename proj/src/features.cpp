#include "gridlift/features.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>

#include "gridlift/error.hpp"

namespace gridlift {

namespace {

// FFTW's planner is not reentrant; execution of distinct plans is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(fftw_complex* p) const { fftw_free(p); }
};

using FftwBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

FftwBuffer fftw_buffer(std::size_t count) {
  auto* p = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * count));
  if (p == nullptr) throw std::bad_alloc();
  return FftwBuffer(p);
}

// Convex combinations of channel values can land an ulp outside the
// channel range; pin them back so achromatic pixels map to themselves.
double pin(double v, double r, double g, double b) {
  return std::clamp(v, std::min({r, g, b}), std::max({r, g, b}));
}

template <typename PixelFn>
FeatureField per_pixel(const ImageGrid& image, PixelFn fn) {
  FeatureField out(image.rows(), image.cols(), 1);
  for (std::size_t i = 0; i < image.rows(); ++i) {
    for (std::size_t j = 0; j < image.cols(); ++j) {
      out.at(i, j) = fn(image.rgb(i, j, 0), image.rgb(i, j, 1), image.rgb(i, j, 2));
    }
  }
  return out;
}

}  // namespace

void FeatureStrategy::validate() const {
  if (dims < 3 || dims > 5) {
    throw Error(ErrorCode::InvalidDims, "dims must be 3, 4 or 5, got " + std::to_string(dims));
  }
}

std::string FeatureStrategy::label() const {
  if (dims == 4) return "rb-4d";
  if (dims == 5) return "rgb-5d";
  return to_string(kind);
}

FeatureKind parse_feature_kind(const std::string& name) {
  if (name == "rgb-mean") return FeatureKind::RgbMean;
  if (name == "fourier") return FeatureKind::Fourier;
  if (name == "brightness") return FeatureKind::Brightness;
  if (name == "grayscale") return FeatureKind::Grayscale;
  if (name == "hsv-v") return FeatureKind::HsvValue;
  throw Error(ErrorCode::InvalidArgument, "unknown feature strategy '" + name + "'");
}

std::string to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::RgbMean: return "rgb-mean";
    case FeatureKind::Fourier: return "fourier";
    case FeatureKind::Brightness: return "brightness";
    case FeatureKind::Grayscale: return "grayscale";
    case FeatureKind::HsvValue: return "hsv-v";
  }
  return "unknown";
}

FeatureField::FeatureField(std::size_t rows, std::size_t cols, std::size_t depth)
    : FeatureField(rows, cols, depth, std::vector<double>(rows * cols * depth, 0.0)) {}

FeatureField::FeatureField(std::size_t rows, std::size_t cols, std::size_t depth,
                           std::vector<double> values)
    : rows_(rows), cols_(cols), depth_(depth), values_(std::move(values)) {
  if (rows_ == 0 || cols_ == 0 || depth_ == 0) {
    throw Error(ErrorCode::InvalidArgument, "feature field must be non-empty");
  }
  if (values_.size() != rows_ * cols_ * depth_) {
    throw Error(ErrorCode::InvalidArgument, "feature field value count mismatch");
  }
}

FeatureField z_rgb_mean(const ImageGrid& image) {
  return per_pixel(image, [](double r, double g, double b) {
    return pin((r + g + b) / 3.0, r, g, b);
  });
}

FeatureField z_fourier_raw(const ImageGrid& image) {
  const std::size_t m = image.rows();
  const std::size_t n = image.cols();
  const std::size_t count = m * n;

  FftwBuffer in = fftw_buffer(count);
  FftwBuffer out = fftw_buffer(count);
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_2d(static_cast<int>(m), static_cast<int>(n), in.get(), out.get(),
                            FFTW_FORWARD, FFTW_ESTIMATE);
  }

  std::vector<double> power(count, 0.0);
  const std::size_t channels = image.channels() == 1 ? 1 : 3;
  for (std::size_t c = 0; c < channels; ++c) {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        in[i * n + j][0] = image.at(i, j, c);
        in[i * n + j][1] = 0.0;
      }
    }
    fftw_execute(plan);
    for (std::size_t k = 0; k < count; ++k) {
      power[k] += out[k][0] * out[k][0] + out[k][1] * out[k][1];
    }
  }
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }

  // A grayscale grid stands for three equal channels.
  const double replicas = channels == 1 ? 3.0 : 1.0;
  std::vector<double> z(count);
  for (std::size_t k = 0; k < count; ++k) z[k] = std::sqrt(replicas * power[k]);
  return FeatureField(m, n, 1, std::move(z));
}

FeatureField z_fourier(const ImageGrid& image) {
  const FeatureField raw = z_fourier_raw(image);
  std::vector<double> z(raw.values().begin(), raw.values().end());
  for (double& v : z) v = std::log1p(v);
  const auto [lo, hi] = std::minmax_element(z.begin(), z.end());
  const double low = *lo;
  const double spread = *hi - *lo;
  for (double& v : z) v = spread > 0.0 ? std::clamp((v - low) / spread, 0.0, 1.0) : 0.0;
  return FeatureField(raw.rows(), raw.cols(), 1, std::move(z));
}

FeatureField z_channel(const ImageGrid& image, ChannelKind kind) {
  switch (kind) {
    case ChannelKind::Grayscale:
      return per_pixel(image, [](double r, double g, double b) {
        return pin(0.299 * r + 0.587 * g + 0.114 * b, r, g, b);
      });
    case ChannelKind::Brightness:
      return per_pixel(image, [](double r, double g, double b) {
        return pin(std::sqrt(0.299 * r * r + 0.587 * g * g + 0.114 * b * b), r, g, b);
      });
    case ChannelKind::HsvValue:
      return per_pixel(image, [](double r, double g, double b) { return std::max({r, g, b}); });
  }
  throw Error(ErrorCode::InvalidArgument, "unknown channel kind");
}

FeatureField lift_multidim(const ImageGrid& image, int dims) {
  if (dims != 4 && dims != 5) {
    throw Error(ErrorCode::InvalidDims, "multidimensional lift needs dims 4 or 5, got " +
                                            std::to_string(dims));
  }
  const std::vector<std::size_t> channels =
      dims == 4 ? std::vector<std::size_t>{0, 2} : std::vector<std::size_t>{0, 1, 2};
  FeatureField out(image.rows(), image.cols(), channels.size());
  for (std::size_t i = 0; i < image.rows(); ++i) {
    for (std::size_t j = 0; j < image.cols(); ++j) {
      for (std::size_t c = 0; c < channels.size(); ++c) {
        out.at(i, j, c) = image.rgb(i, j, channels[c]);
      }
    }
  }
  return out;
}

FeatureField extract_features(const ImageGrid& image, const FeatureStrategy& strategy) {
  strategy.validate();
  if (strategy.dims > 3) return lift_multidim(image, strategy.dims);
  switch (strategy.kind) {
    case FeatureKind::RgbMean: return z_rgb_mean(image);
    case FeatureKind::Fourier: return z_fourier(image);
    case FeatureKind::Brightness: return z_channel(image, ChannelKind::Brightness);
    case FeatureKind::Grayscale: return z_channel(image, ChannelKind::Grayscale);
    case FeatureKind::HsvValue: return z_channel(image, ChannelKind::HsvValue);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown feature kind");
}

}  // namespace gridlift
