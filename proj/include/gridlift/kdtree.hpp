#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace gridlift {

/// Static k-d tree over a flat coordinate array with runtime dimension.
/// Holds a view: the coordinates must outlive the tree.
class KdTree {
 public:
  KdTree(std::span<const double> coords, std::size_t dims);

  struct Hit {
    std::size_t index = std::numeric_limits<std::size_t>::max();
    double distance2 = std::numeric_limits<double>::infinity();
  };

  /// Nearest stored point to `query`, skipping stored index `skip`. Ties go to
  /// the lower index.
  Hit nearest(std::span<const double> query,
              std::size_t skip = std::numeric_limits<std::size_t>::max()) const;

  std::size_t size() const noexcept { return order_.size(); }

 private:
  struct Node {
    std::size_t begin;
    std::size_t end;
    std::size_t axis;
    double split;
    std::ptrdiff_t left = -1;
    std::ptrdiff_t right = -1;
  };

  std::ptrdiff_t build(std::size_t begin, std::size_t end);
  void search(std::ptrdiff_t node, std::span<const double> query, std::size_t skip,
              Hit& best) const;
  double coord(std::size_t point, std::size_t axis) const {
    return coords_[point * dims_ + axis];
  }

  std::span<const double> coords_;
  std::size_t dims_;
  std::vector<std::size_t> order_;
  std::vector<Node> nodes_;
};

}  // namespace gridlift
