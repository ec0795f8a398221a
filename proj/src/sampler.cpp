#include "gridlift/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "gridlift/error.hpp"

namespace gridlift {

namespace {

constexpr std::size_t kPoissonAttemptsPerPoint = 30;

// Quadratic patches for the lattice points actually drawn, per channel.
class PatchCache {
 public:
  explicit PatchCache(const SparseCloud& cloud) : cloud_(cloud) {
    const std::size_t depth = cloud.feature_depth();
    low_.assign(depth, std::numeric_limits<double>::infinity());
    high_.assign(depth, -std::numeric_limits<double>::infinity());
    for (std::size_t k = 0; k < cloud.size(); ++k) {
      const auto p = cloud.point(k);
      for (std::size_t c = 0; c < depth; ++c) {
        low_[c] = std::min(low_[c], p[2 + c]);
        high_[c] = std::max(high_[c], p[2 + c]);
      }
    }
  }

  double evaluate(std::size_t index, std::size_t channel, double dx, double dy) {
    const auto& patches = patches_for(index);
    return std::clamp(patches[channel].evaluate(dx, dy), low_[channel], high_[channel]);
  }

 private:
  const std::vector<QuadraticPatch>& patches_for(std::size_t index) {
    auto it = cache_.find(index);
    if (it != cache_.end()) return it->second;
    const LatticeIndex at = cloud_.project(index);
    std::vector<QuadraticPatch> patches;
    for (std::size_t c = 0; c < cloud_.feature_depth(); ++c) patches.push_back(fit(at, c));
    return cache_.emplace(index, std::move(patches)).first->second;
  }

  // Border and thin lattices widen the window once, then fall back to the
  // constant patch through the lattice value.
  QuadraticPatch fit(LatticeIndex at, std::size_t channel) const {
    for (int radius : {1, 2}) {
      try {
        return quadratic_fit_curvature(cloud_, at, radius, channel).patch;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::DegenerateNeighborhood) throw;
      }
    }
    QuadraticPatch flat;
    flat.s0 = cloud_.feature(at, channel);
    return flat;
  }

  const SparseCloud& cloud_;
  std::vector<double> low_;
  std::vector<double> high_;
  std::unordered_map<std::size_t, std::vector<QuadraticPatch>> cache_;
};

struct Candidate {
  std::size_t index;
  std::vector<double> coords;
};

Candidate draw_candidate(const SparseCloud& cloud, const SamplingDistribution& dist,
                         SampleStream& stream, PatchCache& patches) {
  Candidate out;
  out.index = inverse_cdf_sample(dist, stream.unit());
  const double dx = stream.jitter();
  const double dy = stream.jitter();
  const auto base = cloud.point(out.index);
  out.coords.resize(static_cast<std::size_t>(cloud.dims()));
  out.coords[0] = base[0] + dx;
  out.coords[1] = base[1] + dy;
  for (std::size_t c = 0; c < cloud.feature_depth(); ++c) {
    out.coords[2 + c] = patches.evaluate(out.index, c, dx, dy);
  }
  return out;
}

// Accepted Poisson-disk points bucketed on the unit lattice.
class DiskGrid {
 public:
  explicit DiskGrid(LatticeShape shape) : shape_(shape), cells_(shape.size()) {}

  bool clear_of(double x, double y, double radius) const {
    const auto reach = static_cast<std::ptrdiff_t>(std::ceil(radius));
    const auto [ci, cj] = cell(x, y);
    for (std::ptrdiff_t i = ci - reach; i <= ci + reach; ++i) {
      for (std::ptrdiff_t j = cj - reach; j <= cj + reach; ++j) {
        if (i < 0 || j < 0 || i >= static_cast<std::ptrdiff_t>(shape_.rows) ||
            j >= static_cast<std::ptrdiff_t>(shape_.cols)) {
          continue;
        }
        for (const auto& [px, py] : cells_[static_cast<std::size_t>(i) * shape_.cols +
                                           static_cast<std::size_t>(j)]) {
          if ((px - x) * (px - x) + (py - y) * (py - y) < radius * radius) return false;
        }
      }
    }
    return true;
  }

  void insert(double x, double y) {
    const auto [i, j] = cell(x, y);
    cells_[static_cast<std::size_t>(i) * shape_.cols + static_cast<std::size_t>(j)]
        .emplace_back(x, y);
  }

 private:
  std::pair<std::ptrdiff_t, std::ptrdiff_t> cell(double x, double y) const {
    const auto rows = static_cast<std::ptrdiff_t>(shape_.rows);
    const auto cols = static_cast<std::ptrdiff_t>(shape_.cols);
    const auto j = std::clamp<std::ptrdiff_t>(std::lround(x), 0, cols - 1);
    const auto i = std::clamp<std::ptrdiff_t>(rows - 1 - std::lround(y), 0, rows - 1);
    return {i, j};
  }

  LatticeShape shape_;
  std::vector<std::vector<std::pair<double, double>>> cells_;
};

}  // namespace

SamplingDistribution SamplingDistribution::from_weights(std::span<const double> weights) {
  if (weights.empty()) throw Error(ErrorCode::InvalidArgument, "distribution needs weights");
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::InvalidArgument, "weights must be finite and nonnegative");
    }
  }
  SamplingDistribution dist;
  dist.cumulative_.resize(weights.size());
  std::partial_sum(weights.begin(), weights.end(), dist.cumulative_.begin());
  const double total = dist.cumulative_.back();
  if (!(total > 0.0)) throw Error(ErrorCode::InvalidArgument, "weights sum to zero");

  dist.weights_.resize(weights.size());
  std::transform(weights.begin(), weights.end(), dist.weights_.begin(),
                 [total](double w) { return w / total; });
  for (double& c : dist.cumulative_) c /= total;
  dist.cumulative_.back() = 1.0;
  return dist;
}

SamplingDistribution curvature_distribution(const CurvatureField& field, double floor) {
  if (!(floor > 0.0)) throw Error(ErrorCode::InvalidArgument, "density floor must be positive");
  std::vector<double> weights(field.kappa().size());
  std::transform(field.kappa().begin(), field.kappa().end(), weights.begin(),
                 [floor](double k) { return std::abs(k) + floor; });
  return SamplingDistribution::from_weights(weights);
}

std::size_t inverse_cdf_sample(const SamplingDistribution& dist, double r) {
  if (!(r >= 0.0 && r <= 1.0)) throw Error(ErrorCode::InvalidArgument, "r must lie in [0, 1]");
  const auto& cdf = dist.cumulative();
  const auto it = std::lower_bound(cdf.begin(), cdf.end(), r);
  return it == cdf.end() ? cdf.size() - 1 : static_cast<std::size_t>(it - cdf.begin());
}

SamplerMode parse_sampler_mode(const std::string& name) {
  if (name == "monte-carlo") return SamplerMode::MonteCarlo;
  if (name == "poisson-disk") return SamplerMode::PoissonDisk;
  throw Error(ErrorCode::InvalidArgument, "unknown sampler '" + name + "'");
}

std::string to_string(SamplerMode mode) {
  return mode == SamplerMode::MonteCarlo ? "monte-carlo" : "poisson-disk";
}

DenseCloud densify(const SurfaceMesh& mesh, const CurvatureField& curvature, std::size_t count,
                   std::uint64_t seed, SamplerMode mode, double floor) {
  const SparseCloud& cloud = mesh.cloud;
  if (cloud.size() == 0) throw Error(ErrorCode::EmptyMesh, "mesh has no vertices");
  if (count == 0) throw Error(ErrorCode::InvalidN, "point count must be positive");
  if (curvature.shape().rows != cloud.rows() || curvature.shape().cols != cloud.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "curvature lattice does not match the mesh");
  }

  const SamplingDistribution dist = curvature_distribution(curvature, floor);
  SampleStream stream(seed);
  PatchCache patches(cloud);

  DenseCloud out;
  out.dims = cloud.dims();
  out.seed = seed;
  out.provenance = {cloud.strategy(), mesh.face_kind, mode};
  out.coords.reserve(count * static_cast<std::size_t>(out.dims));
  out.source_index.reserve(count);

  const auto accept = [&out](Candidate&& c) {
    out.coords.insert(out.coords.end(), c.coords.begin(), c.coords.end());
    out.source_index.push_back(c.index);
  };

  if (mode == SamplerMode::PoissonDisk) {
    DiskGrid grid(cloud.shape());
    const double n = static_cast<double>(count);
    for (std::size_t attempt = 0;
         attempt < kPoissonAttemptsPerPoint * count && out.source_index.size() < count;
         ++attempt) {
      Candidate c = draw_candidate(cloud, dist, stream, patches);
      const double radius =
          std::min(kMaxPoissonRadius, 0.5 / std::sqrt(n * dist.weights()[c.index]));
      if (!grid.clear_of(c.coords[0], c.coords[1], radius)) continue;
      grid.insert(c.coords[0], c.coords[1]);
      accept(std::move(c));
    }
  }
  while (out.source_index.size() < count) accept(draw_candidate(cloud, dist, stream, patches));
  return out;
}

}  // namespace gridlift
