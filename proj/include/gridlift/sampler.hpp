#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "gridlift/curvature.hpp"
#include "gridlift/features.hpp"
#include "gridlift/mesh.hpp"

namespace gridlift {

inline constexpr double kDefaultDensityFloor = 1e-6;

/// Portable uniform variates on top of std::mt19937_64, whose output
/// sequence the standard fixes bit-for-bit. Doubles are built from the top
/// 53 bits of each draw, so a seed produces the same stream on every
/// conforming platform.
class SampleStream {
 public:
  explicit SampleStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on (0, 1].
  double unit() { return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53; }
  /// Uniform on [-0.5, 0.5).
  double jitter() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53 - 0.5; }

 private:
  std::mt19937_64 engine_;
};

/// Discrete law over flattened lattice indices with its prefix sums.
class SamplingDistribution {
 public:
  /// Normalizes nonnegative weights with a positive total.
  /// Throws InvalidArgument otherwise.
  static SamplingDistribution from_weights(std::span<const double> weights);

  const std::vector<double>& weights() const noexcept { return weights_; }
  /// Nondecreasing; the last entry is exactly 1.
  const std::vector<double>& cumulative() const noexcept { return cumulative_; }
  std::size_t size() const noexcept { return weights_.size(); }

 private:
  std::vector<double> weights_;
  std::vector<double> cumulative_;
};

/// P(i) proportional to |kappa_i| + floor. The floor keeps flat regions in
/// the support.
SamplingDistribution curvature_distribution(const CurvatureField& field,
                                            double floor = kDefaultDensityFloor);

/// Smallest 0-based index whose cumulative probability is >= r.
/// Throws InvalidArgument unless 0 <= r <= 1.
std::size_t inverse_cdf_sample(const SamplingDistribution& dist, double r);

enum class SamplerMode { MonteCarlo, PoissonDisk };

SamplerMode parse_sampler_mode(const std::string& name);
std::string to_string(SamplerMode mode);

struct Provenance {
  FeatureStrategy strategy;
  FaceKind face_kind = FaceKind::Square;
  SamplerMode mode = SamplerMode::MonteCarlo;
};

/// N points sampled off a surface mesh; coordinates are (x, y, features...).
struct DenseCloud {
  int dims = 3;
  std::vector<double> coords;
  /// Flattened lattice index each point was drawn from.
  std::vector<std::size_t> source_index;
  std::uint64_t seed = 0;
  Provenance provenance;

  std::size_t size() const noexcept {
    return coords.size() / static_cast<std::size_t>(dims);
  }
  std::span<const double> point(std::size_t k) const {
    return std::span<const double>(coords).subspan(k * static_cast<std::size_t>(dims),
                                                   static_cast<std::size_t>(dims));
  }
};

/// Draws `count` points.
///
/// MonteCarlo: each point consumes three variates in order (index draw, x
/// jitter, y jitter); the point is the drawn lattice location offset by the
/// jitter, with features taken from the local quadratic patch at that offset
/// and clamped to the cloud's per-channel feature range. Point k therefore
/// depends only on the first 3(k + 1) variates, and a smaller cloud is a
/// prefix of a larger one with the same seed.
///
/// PoissonDisk: the same candidate generator, rejecting candidates closer in
/// (x, y) than 0.5 / sqrt(N P(i)) (capped at kMaxPoissonRadius) to an
/// accepted point; after 30 N attempts the remainder is filled MonteCarlo
/// style from the same stream.
///
/// Errors: EmptyMesh (no vertices), InvalidN (count == 0), DimensionMismatch
/// (curvature and mesh lattices differ).
DenseCloud densify(const SurfaceMesh& mesh, const CurvatureField& curvature, std::size_t count,
                   std::uint64_t seed, SamplerMode mode = SamplerMode::MonteCarlo,
                   double floor = kDefaultDensityFloor);

inline constexpr double kMaxPoissonRadius = 4.0;

}  // namespace gridlift
