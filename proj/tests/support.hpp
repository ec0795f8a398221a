#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "gridlift/image.hpp"

namespace testing_support {

/// Test-side generator, kept separate from the library's sample stream.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  std::size_t index(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(engine_);
  }
  std::uint64_t bits() { return engine_(); }
  std::mt19937& engine() { return engine_; }

 private:
  std::mt19937 engine_;
};

inline gridlift::ImageGrid random_image(Gen& gen, std::size_t rows, std::size_t cols,
                                        std::size_t channels = 3, bool eight_bit = false) {
  std::vector<double> v(rows * cols * channels);
  for (double& x : v) {
    x = eight_bit ? static_cast<double>(gen.index(0, 255)) / 255.0 : gen.uniform();
  }
  return gridlift::ImageGrid(rows, cols, channels, std::move(v), "random");
}

inline gridlift::ImageGrid constant_image(std::size_t rows, std::size_t cols, double value,
                                          std::size_t channels = 3) {
  return gridlift::ImageGrid(rows, cols, channels,
                             std::vector<double>(rows * cols * channels, value), "constant");
}

template <class F>
gridlift::ImageGrid image_from(std::size_t rows, std::size_t cols, F&& f) {
  std::vector<double> v;
  v.reserve(rows * cols * 3);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const auto px = f(i, j);
      v.push_back(px[0]);
      v.push_back(px[1]);
      v.push_back(px[2]);
    }
  }
  return gridlift::ImageGrid(rows, cols, 3, std::move(v), "synthetic");
}

/// Per-pixel channel mean, read through the raw value span.
inline std::vector<double> mean_oracle(const gridlift::ImageGrid& img) {
  std::vector<double> out;
  const auto v = img.values();
  const std::size_t k = img.channels();
  for (std::size_t p = 0; p < img.rows() * img.cols(); ++p) {
    if (k == 1) {
      out.push_back((v[p] + v[p] + v[p]) / 3.0);
    } else {
      out.push_back((v[p * 3] + v[p * 3 + 1] + v[p * 3 + 2]) / 3.0);
    }
  }
  return out;
}

/// Direct double-sum DFT magnitude sqrt(sum_C |F_C(u, v)|^2).
inline std::vector<double> naive_dft_magnitude(const gridlift::ImageGrid& img) {
  const std::size_t m = img.rows();
  const std::size_t n = img.cols();
  std::vector<double> out(m * n, 0.0);
  for (std::size_t u = 0; u < m; ++u) {
    for (std::size_t w = 0; w < n; ++w) {
      double power = 0.0;
      for (std::size_t c = 0; c < 3; ++c) {
        std::complex<double> acc = 0.0;
        for (std::size_t a = 0; a < m; ++a) {
          for (std::size_t b = 0; b < n; ++b) {
            const double phase = -2.0 * std::numbers::pi *
                                 (static_cast<double>(u * a % m) / static_cast<double>(m) +
                                  static_cast<double>(w * b % n) / static_cast<double>(n));
            acc += img.rgb(a, b, c) * std::polar(1.0, phase);
          }
        }
        power += std::norm(acc);
      }
      out[u * n + w] = std::sqrt(power);
    }
  }
  return out;
}

/// Smallest index whose running sum reaches r, scanning left to right.
inline std::size_t linear_scan(const std::vector<double>& cumulative, double r) {
  for (std::size_t i = 0; i < cumulative.size(); ++i) {
    if (cumulative[i] >= r) return i;
  }
  return cumulative.size() - 1;
}

/// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::mt19937_64 salt(std::random_device{}());
    path_ = std::filesystem::temp_directory_path() /
            ("gridlift-" + tag + "-" + std::to_string(salt()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::FILE* f = std::fopen(p.string().c_str(), "rb");
  std::string out;
  if (!f) return out;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, got);
  std::fclose(f);
  return out;
}

}  // namespace testing_support
