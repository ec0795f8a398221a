#include "gridlift/kdtree.hpp"

#include <algorithm>
#include <numeric>

#include "gridlift/error.hpp"

namespace gridlift {

namespace {
constexpr std::size_t kLeafSize = 8;
}

KdTree::KdTree(std::span<const double> coords, std::size_t dims)
    : coords_(coords), dims_(dims) {
  if (dims_ == 0 || coords_.size() % dims_ != 0) {
    throw Error(ErrorCode::InvalidArgument, "k-d tree coordinate count mismatch");
  }
  order_.resize(coords_.size() / dims_);
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  if (!order_.empty()) build(0, order_.size());
}

std::ptrdiff_t KdTree::build(std::size_t begin, std::size_t end) {
  const auto id = static_cast<std::ptrdiff_t>(nodes_.size());
  nodes_.push_back({begin, end, 0, 0.0});
  if (end - begin <= kLeafSize) return id;

  // Split the widest axis at the median.
  std::size_t axis = 0;
  double widest = -1.0;
  for (std::size_t a = 0; a < dims_; ++a) {
    double lo = coord(order_[begin], a);
    double hi = lo;
    for (std::size_t k = begin + 1; k < end; ++k) {
      lo = std::min(lo, coord(order_[k], a));
      hi = std::max(hi, coord(order_[k], a));
    }
    if (hi - lo > widest) {
      widest = hi - lo;
      axis = a;
    }
  }
  const std::size_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(begin),
                   order_.begin() + static_cast<std::ptrdiff_t>(mid),
                   order_.begin() + static_cast<std::ptrdiff_t>(end),
                   [&](std::size_t a, std::size_t b) {
                     const double ca = coord(a, axis);
                     const double cb = coord(b, axis);
                     return ca < cb || (ca == cb && a < b);
                   });
  const double split = coord(order_[mid], axis);
  const std::ptrdiff_t left = build(begin, mid);
  const std::ptrdiff_t right = build(mid, end);
  Node& node = nodes_[static_cast<std::size_t>(id)];
  node.axis = axis;
  node.split = split;
  node.left = left;
  node.right = right;
  return id;
}

KdTree::Hit KdTree::nearest(std::span<const double> query, std::size_t skip) const {
  if (query.size() != dims_) {
    throw Error(ErrorCode::DimensionMismatch, "query dimension does not match the tree");
  }
  Hit best;
  if (!nodes_.empty()) search(0, query, skip, best);
  return best;
}

void KdTree::search(std::ptrdiff_t id, std::span<const double> query, std::size_t skip,
                    Hit& best) const {
  const Node& node = nodes_[static_cast<std::size_t>(id)];
  if (node.left < 0) {
    for (std::size_t k = node.begin; k < node.end; ++k) {
      const std::size_t p = order_[k];
      if (p == skip) continue;
      double d2 = 0.0;
      for (std::size_t a = 0; a < dims_; ++a) {
        const double d = coord(p, a) - query[a];
        d2 += d * d;
      }
      if (d2 < best.distance2 || (d2 == best.distance2 && p < best.index)) best = {p, d2};
    }
    return;
  }
  const double delta = query[node.axis] - node.split;
  const std::ptrdiff_t near = delta < 0.0 ? node.left : node.right;
  const std::ptrdiff_t far = delta < 0.0 ? node.right : node.left;
  search(near, query, skip, best);
  // <= keeps equal-distance candidates on the far side for tie-breaking.
  if (delta * delta <= best.distance2) search(far, query, skip, best);
}

}  // namespace gridlift
