#pragma once

// Bounding-volume hierarchy over the consecutive segments of a polyline.
// Consecutive segments of a curve iterate are spatially coherent, so index
// ranges make good clusters.

#include <algorithm>
#include <complex>
#include <span>
#include <vector>

namespace wiggle::detail {

class SegmentBvh {
 public:
  static constexpr std::size_t kLeafSize = 8;

  explicit SegmentBvh(std::span<const std::complex<double>> vertices) : vertices_(vertices) {
    if (vertices.size() >= 2) {
      nodes_.reserve(2 * (vertices.size() / kLeafSize + 1));
      build(0, vertices.size() - 1);
    }
  }

  /// Calls visit(i, j), i < j, for every segment pair whose boxes come
  /// within `inflate`; stops early when visit returns false.
  template <class Visit>
  void self_pairs(double inflate, Visit&& visit) const {
    if (!nodes_.empty()) self_node(0, inflate, visit);
  }

  /// Calls visit(i, j) for segment i of *this and j of `other`.
  template <class Visit>
  void cross_pairs(const SegmentBvh& other, double inflate, Visit&& visit) const {
    if (!nodes_.empty() && !other.nodes_.empty()) {
      pair_nodes(*this, 0, other, 0, inflate, visit);
    }
  }

 private:
  struct Node {
    double x0, y0, x1, y1;
    std::size_t lo, hi;  // segment index range [lo, hi)
    int left = -1, right = -1;
  };

  int build(std::size_t lo, std::size_t hi) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(Node{0, 0, 0, 0, lo, hi});
    if (hi - lo <= kLeafSize) {
      double x0 = vertices_[lo].real(), x1 = x0, y0 = vertices_[lo].imag(), y1 = y0;
      for (std::size_t k = lo + 1; k <= hi; ++k) {
        x0 = std::min(x0, vertices_[k].real());
        x1 = std::max(x1, vertices_[k].real());
        y0 = std::min(y0, vertices_[k].imag());
        y1 = std::max(y1, vertices_[k].imag());
      }
      nodes_[id].x0 = x0;
      nodes_[id].y0 = y0;
      nodes_[id].x1 = x1;
      nodes_[id].y1 = y1;
      return id;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    const int l = build(lo, mid);
    const int r = build(mid, hi);
    Node& n = nodes_[id];
    n.left = l;
    n.right = r;
    n.x0 = std::min(nodes_[l].x0, nodes_[r].x0);
    n.y0 = std::min(nodes_[l].y0, nodes_[r].y0);
    n.x1 = std::max(nodes_[l].x1, nodes_[r].x1);
    n.y1 = std::max(nodes_[l].y1, nodes_[r].y1);
    return id;
  }

  static bool overlap(const Node& a, const Node& b, double inflate) {
    return a.x0 <= b.x1 + inflate && b.x0 <= a.x1 + inflate && a.y0 <= b.y1 + inflate &&
           b.y0 <= a.y1 + inflate;
  }

  template <class Visit>
  bool self_node(int id, double inflate, Visit& visit) const {
    const Node& n = nodes_[id];
    if (n.left < 0) {
      for (std::size_t i = n.lo; i < n.hi; ++i) {
        for (std::size_t j = i + 1; j < n.hi; ++j) {
          if (!visit(i, j)) return false;
        }
      }
      return true;
    }
    return self_node(n.left, inflate, visit) && self_node(n.right, inflate, visit) &&
           pair_nodes(*this, n.left, *this, n.right, inflate, visit);
  }

  template <class Visit>
  static bool pair_nodes(const SegmentBvh& ta, int ia, const SegmentBvh& tb, int ib,
                         double inflate, Visit& visit) {
    const Node& a = ta.nodes_[ia];
    const Node& b = tb.nodes_[ib];
    if (!overlap(a, b, inflate)) return true;
    const bool a_leaf = a.left < 0;
    const bool b_leaf = b.left < 0;
    if (a_leaf && b_leaf) {
      for (std::size_t i = a.lo; i < a.hi; ++i) {
        for (std::size_t j = b.lo; j < b.hi; ++j) {
          if (!visit(i, j)) return false;
        }
      }
      return true;
    }
    if (b_leaf || (!a_leaf && a.hi - a.lo >= b.hi - b.lo)) {
      return pair_nodes(ta, a.left, tb, ib, inflate, visit) &&
             pair_nodes(ta, a.right, tb, ib, inflate, visit);
    }
    return pair_nodes(ta, ia, tb, b.left, inflate, visit) &&
           pair_nodes(ta, ia, tb, b.right, inflate, visit);
  }

  std::span<const std::complex<double>> vertices_;
  std::vector<Node> nodes_;
};

}  // namespace wiggle::detail
