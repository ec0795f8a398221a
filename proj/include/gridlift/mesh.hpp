#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gridlift/features.hpp"
#include "gridlift/image.hpp"

namespace gridlift {

struct LatticeIndex {
  std::size_t row = 0;
  std::size_t col = 0;
  bool operator==(const LatticeIndex&) const = default;
};

struct LatticeShape {
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::size_t size() const noexcept { return rows * cols; }
  std::size_t flatten(LatticeIndex p) const noexcept { return p.row * cols + p.col; }
  LatticeIndex unflatten(std::size_t k) const noexcept { return {k / cols, k % cols}; }
  bool contains(LatticeIndex p) const noexcept { return p.row < rows && p.col < cols; }
};

/// One point per pixel: (x, y, f1, ..., f_{dims-2}) with x = col,
/// y = rows - 1 - row, and features scaled by max(rows, cols) - 1 so every
/// axis shares the footprint's extent. Point k belongs to pixel
/// shape().unflatten(k).
class SparseCloud {
 public:
  SparseCloud(LatticeShape shape, int dims, std::vector<double> coords,
              FeatureStrategy strategy);

  LatticeShape shape() const noexcept { return shape_; }
  std::size_t rows() const noexcept { return shape_.rows; }
  std::size_t cols() const noexcept { return shape_.cols; }
  int dims() const noexcept { return dims_; }
  std::size_t feature_depth() const noexcept { return static_cast<std::size_t>(dims_ - 2); }
  std::size_t size() const noexcept { return shape_.size(); }
  const FeatureStrategy& strategy() const noexcept { return strategy_; }
  std::span<const double> coords() const noexcept { return coords_; }

  /// Multiplier that took [0, 1] features to mesh units.
  double feature_scale() const noexcept;

  std::span<const double> point(std::size_t k) const {
    return std::span<const double>(coords_).subspan(k * static_cast<std::size_t>(dims_),
                                                    static_cast<std::size_t>(dims_));
  }
  double feature(LatticeIndex p, std::size_t channel) const {
    return point(shape_.flatten(p))[2 + channel];
  }
  /// Index projection back to the pixel lattice.
  LatticeIndex project(std::size_t k) const noexcept { return shape_.unflatten(k); }

  bool operator==(const SparseCloud& other) const {
    return shape_.rows == other.shape_.rows && shape_.cols == other.shape_.cols &&
           dims_ == other.dims_ && coords_ == other.coords_ && strategy_ == other.strategy_;
  }

 private:
  LatticeShape shape_;
  int dims_;
  std::vector<double> coords_;
  FeatureStrategy strategy_;
};

enum class FaceKind { Triangle, Square };

FaceKind parse_face_kind(const std::string& name);
std::string to_string(FaceKind kind);

/// Sparse cloud plus a fixed-arity face list over flattened vertex indices.
struct SurfaceMesh {
  SparseCloud cloud;
  FaceKind face_kind = FaceKind::Square;
  std::vector<std::uint32_t> indices;  // face_count() * arity() entries

  std::size_t arity() const noexcept { return face_kind == FaceKind::Triangle ? 3 : 4; }
  std::size_t face_count() const noexcept { return indices.size() / arity(); }
  std::span<const std::uint32_t> face(std::size_t f) const {
    return std::span<const std::uint32_t>(indices).subspan(f * arity(), arity());
  }
};

SparseCloud build_sparse_cloud(const ImageGrid& image, const FeatureStrategy& strategy);

/// Assembles a cloud from an already-extracted field (depth = dims - 2).
SparseCloud build_sparse_cloud(const FeatureField& features, const FeatureStrategy& strategy);

/// Lattice neighborhood test |di| <= 1 and |dj| <= 1, which admits p == q.
/// Throws IndexOutOfRange when either index falls outside the shape.
bool adjacent(LatticeShape shape, LatticeIndex p, LatticeIndex q);

/// Square: (v[i][j], v[i][j+1], v[i+1][j+1], v[i+1][j]) per cell.
/// Triangle: each cell cut along the v[i][j] -- v[i+1][j+1] diagonal.
/// Grids with a single row or column get no faces.
SurfaceMesh build_faces(SparseCloud cloud, FaceKind kind);

}  // namespace gridlift
