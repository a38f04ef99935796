#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

namespace tacshade {

/// Static k-d tree over an index set of points with Dim coordinates.
/// Queries return exact results (no approximation), so callers can rely on
/// them matching an exhaustive scan.
template <std::size_t Dim>
class KdTree {
 public:
  using Point = std::array<double, Dim>;

  KdTree() = default;

  explicit KdTree(std::vector<Point> points) : points_(std::move(points)) {
    order_.resize(points_.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    nodes_.reserve(points_.size());
    if (!points_.empty()) root_ = build(0, points_.size(), 0);
  }

  std::size_t size() const noexcept { return points_.size(); }
  const Point& point(std::size_t i) const noexcept { return points_[i]; }

  /// Index of the nearest point and its squared distance. Ties resolve to the
  /// lowest index.
  std::pair<std::size_t, double> nearest(const Point& query) const {
    std::size_t best = std::numeric_limits<std::size_t>::max();
    double best_d2 = std::numeric_limits<double>::infinity();
    if (root_ != kNone) nearest_impl(root_, query, best, best_d2);
    return {best, best_d2};
  }

  /// Indices of all points with squared distance <= radius^2, sorted ascending.
  std::vector<std::size_t> within(const Point& query, double radius) const {
    std::vector<std::size_t> out;
    if (root_ != kNone) within_impl(root_, query, radius * radius, out);
    std::sort(out.begin(), out.end());
    return out;
  }

  static double squared_distance(const Point& a, const Point& b) noexcept {
    double s = 0.0;
    for (std::size_t k = 0; k < Dim; ++k) {
      const double d = a[k] - b[k];
      s += d * d;
    }
    return s;
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  struct Node {
    std::size_t index;  // point stored at this node
    std::size_t axis;
    std::size_t left = kNone;
    std::size_t right = kNone;
  };

  std::size_t build(std::size_t begin, std::size_t end, std::size_t depth) {
    if (begin >= end) return kNone;
    const std::size_t axis = depth % Dim;
    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(begin),
                     order_.begin() + static_cast<std::ptrdiff_t>(mid),
                     order_.begin() + static_cast<std::ptrdiff_t>(end),
                     [&](std::size_t a, std::size_t b) {
                       if (points_[a][axis] != points_[b][axis]) return points_[a][axis] < points_[b][axis];
                       return a < b;
                     });
    const std::size_t id = nodes_.size();
    nodes_.push_back({order_[mid], axis});
    const std::size_t left = build(begin, mid, depth + 1);
    const std::size_t right = build(mid + 1, end, depth + 1);
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
  }

  void nearest_impl(std::size_t node_id, const Point& q, std::size_t& best, double& best_d2) const {
    const Node& node = nodes_[node_id];
    const double d2 = squared_distance(points_[node.index], q);
    if (d2 < best_d2 || (d2 == best_d2 && node.index < best)) {
      best_d2 = d2;
      best = node.index;
    }
    const double diff = q[node.axis] - points_[node.index][node.axis];
    const std::size_t near = diff < 0.0 ? node.left : node.right;
    const std::size_t far = diff < 0.0 ? node.right : node.left;
    if (near != kNone) nearest_impl(near, q, best, best_d2);
    if (far != kNone && diff * diff <= best_d2) nearest_impl(far, q, best, best_d2);
  }

  void within_impl(std::size_t node_id, const Point& q, double r2, std::vector<std::size_t>& out) const {
    const Node& node = nodes_[node_id];
    if (squared_distance(points_[node.index], q) <= r2) out.push_back(node.index);
    const double diff = q[node.axis] - points_[node.index][node.axis];
    const std::size_t near = diff < 0.0 ? node.left : node.right;
    const std::size_t far = diff < 0.0 ? node.right : node.left;
    if (near != kNone) within_impl(near, q, r2, out);
    if (far != kNone && diff * diff <= r2) within_impl(far, q, r2, out);
  }

  std::vector<Point> points_;
  std::vector<std::size_t> order_;
  std::vector<Node> nodes_;
  std::size_t root_ = kNone;
};

}  // namespace tacshade
