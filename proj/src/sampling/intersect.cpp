#include "amortize/sampling/intersect.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace amortize::sampling {

namespace {

int orientation(const Vec2& a, const Vec2& b, const Vec2& c) {
  const double cross = (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
  if (cross > kCollinearTolerance) return 1;
  if (cross < -kCollinearTolerance) return -1;
  return 0;
}

// c lies within the bounding box of [a, b]; combined with collinearity it is on the segment.
bool on_segment(const Vec2& a, const Vec2& b, const Vec2& c) {
  return c.x() <= std::max(a.x(), b.x()) + kCollinearTolerance && c.x() >= std::min(a.x(), b.x()) - kCollinearTolerance &&
         c.y() <= std::max(a.y(), b.y()) + kCollinearTolerance && c.y() >= std::min(a.y(), b.y()) - kCollinearTolerance;
}

}  // namespace

bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  const int o1 = orientation(a, b, c);
  const int o2 = orientation(a, b, d);
  const int o3 = orientation(c, d, a);
  const int o4 = orientation(c, d, b);
  if (o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return o1 * o2 < 0 && o3 * o4 < 0;
}

bool self_intersects(const Points& path) {
  const Eigen::Index n_seg = path.rows() - 1;
  if (n_seg < 3) return false;

  // Sweep over segments ordered by min x; only x-overlapping pairs are tested.
  std::vector<double> lo(static_cast<std::size_t>(n_seg));
  std::vector<double> hi(static_cast<std::size_t>(n_seg));
  for (Eigen::Index i = 0; i < n_seg; ++i) {
    lo[static_cast<std::size_t>(i)] = std::min(path(i, 0), path(i + 1, 0));
    hi[static_cast<std::size_t>(i)] = std::max(path(i, 0), path(i + 1, 0));
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n_seg));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return lo[static_cast<std::size_t>(a)] < lo[static_cast<std::size_t>(b)];
  });

  for (std::size_t p = 0; p < order.size(); ++p) {
    const Eigen::Index i = order[p];
    const double reach = hi[static_cast<std::size_t>(i)] + kCollinearTolerance;
    const double ylo = std::min(path(i, 1), path(i + 1, 1)) - kCollinearTolerance;
    const double yhi = std::max(path(i, 1), path(i + 1, 1)) + kCollinearTolerance;
    for (std::size_t q = p + 1; q < order.size(); ++q) {
      const Eigen::Index j = order[q];
      if (lo[static_cast<std::size_t>(j)] > reach) break;
      if (std::abs(i - j) < 2) continue;
      if (std::max(path(j, 1), path(j + 1, 1)) < ylo || std::min(path(j, 1), path(j + 1, 1)) > yhi) continue;
      if (segments_intersect(path.row(i).transpose(), path.row(i + 1).transpose(), path.row(j).transpose(),
                             path.row(j + 1).transpose())) {
        return true;
      }
    }
  }
  return false;
}

}  // namespace amortize::sampling
