#include "gridlift/mesh.hpp"

#include <algorithm>
#include <limits>

#include "gridlift/error.hpp"

namespace gridlift {

SparseCloud::SparseCloud(LatticeShape shape, int dims, std::vector<double> coords,
                         FeatureStrategy strategy)
    : shape_(shape), dims_(dims), coords_(std::move(coords)), strategy_(strategy) {
  if (dims_ < 3 || dims_ > 5) throw Error(ErrorCode::InvalidDims, "cloud dims must be 3..5");
  if (coords_.size() != shape_.size() * static_cast<std::size_t>(dims_)) {
    throw Error(ErrorCode::InvalidArgument, "sparse cloud coordinate count mismatch");
  }
}

double SparseCloud::feature_scale() const noexcept {
  return static_cast<double>(std::max(shape_.rows, shape_.cols) - 1);
}

FaceKind parse_face_kind(const std::string& name) {
  if (name == "triangle") return FaceKind::Triangle;
  if (name == "square") return FaceKind::Square;
  throw Error(ErrorCode::InvalidArgument, "unknown face kind '" + name + "'");
}

std::string to_string(FaceKind kind) {
  return kind == FaceKind::Triangle ? "triangle" : "square";
}

SparseCloud build_sparse_cloud(const ImageGrid& image, const FeatureStrategy& strategy) {
  return build_sparse_cloud(extract_features(image, strategy), strategy);
}

SparseCloud build_sparse_cloud(const FeatureField& features, const FeatureStrategy& strategy) {
  strategy.validate();
  const auto depth = static_cast<std::size_t>(strategy.dims - 2);
  if (features.depth() != depth) {
    throw Error(ErrorCode::DimensionMismatch, "feature depth does not match strategy dims");
  }
  const LatticeShape shape{features.rows(), features.cols()};
  const double scale = static_cast<double>(std::max(shape.rows, shape.cols) - 1);
  const auto dims = static_cast<std::size_t>(strategy.dims);

  std::vector<double> coords(shape.size() * dims);
  for (std::size_t i = 0; i < shape.rows; ++i) {
    for (std::size_t j = 0; j < shape.cols; ++j) {
      double* p = &coords[shape.flatten({i, j}) * dims];
      p[0] = static_cast<double>(j);
      p[1] = static_cast<double>(shape.rows - 1 - i);
      for (std::size_t c = 0; c < depth; ++c) p[2 + c] = features.at(i, j, c) * scale;
    }
  }
  return SparseCloud(shape, strategy.dims, std::move(coords), strategy);
}

bool adjacent(LatticeShape shape, LatticeIndex p, LatticeIndex q) {
  if (!shape.contains(p) || !shape.contains(q)) {
    throw Error(ErrorCode::IndexOutOfRange, "lattice index outside the grid");
  }
  const auto dist = [](std::size_t a, std::size_t b) { return a > b ? a - b : b - a; };
  return dist(p.row, q.row) <= 1 && dist(p.col, q.col) <= 1;
}

SurfaceMesh build_faces(SparseCloud cloud, FaceKind kind) {
  const LatticeShape shape = cloud.shape();
  if (shape.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::InvalidArgument, "lattice too large for 32-bit face indices");
  }
  std::vector<std::uint32_t> indices;
  if (shape.rows >= 2 && shape.cols >= 2) {
    const std::size_t cells = (shape.rows - 1) * (shape.cols - 1);
    indices.reserve(cells * (kind == FaceKind::Triangle ? 6 : 4));
    for (std::size_t i = 0; i + 1 < shape.rows; ++i) {
      for (std::size_t j = 0; j + 1 < shape.cols; ++j) {
        const auto a = static_cast<std::uint32_t>(shape.flatten({i, j}));
        const auto b = static_cast<std::uint32_t>(shape.flatten({i, j + 1}));
        const auto c = static_cast<std::uint32_t>(shape.flatten({i + 1, j + 1}));
        const auto d = static_cast<std::uint32_t>(shape.flatten({i + 1, j}));
        if (kind == FaceKind::Square) {
          indices.insert(indices.end(), {a, b, c, d});
        } else {
          indices.insert(indices.end(), {a, b, c, a, c, d});
        }
      }
    }
  }
  return SurfaceMesh{std::move(cloud), kind, std::move(indices)};
}

}  // namespace gridlift
