#include "amortize/geometry/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace amortize::geometry {

double chamfer(const Points& g, const Points& u) {
  if (g.rows() == 0 || u.rows() == 0) throw std::invalid_argument("chamfer needs non-empty point sets");
  std::vector<double> best_u(static_cast<std::size_t>(u.rows()), std::numeric_limits<double>::infinity());
  double sum_g = 0;
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < u.rows(); ++j) {
      const double dx = g(i, 0) - u(j, 0);
      const double dy = g(i, 1) - u(j, 1);
      const double d2 = dx * dx + dy * dy;
      if (d2 < best) best = d2;
      auto& bu = best_u[static_cast<std::size_t>(j)];
      if (d2 < bu) bu = d2;
    }
    sum_g += std::sqrt(best);
  }
  double sum_u = 0;
  for (double d2 : best_u) sum_u += std::sqrt(d2);
  return 0.5 * (sum_g / static_cast<double>(g.rows()) + sum_u / static_cast<double>(u.rows()));
}

double smooth_reg(const Points& path, Points* grad) {
  const Eigen::Index n = path.rows();
  if (n < 3) throw std::invalid_argument("smoothing regulariser needs at least 3 points");
  if (grad) *grad = Points::Zero(n, 2);

  std::vector<Vec2> dir(static_cast<std::size_t>(n - 1));
  std::vector<double> len(static_cast<std::size_t>(n - 1));
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const Vec2 d = (path.row(i + 1) - path.row(i)).transpose();
    const double l = d.norm();
    if (!(l > kMinPointSpacing)) {
      throw std::invalid_argument("smoothing regulariser: points " + std::to_string(i) + " and " +
                                  std::to_string(i + 1) + " coincide");
    }
    len[static_cast<std::size_t>(i)] = l;
    dir[static_cast<std::size_t>(i)] = d / l;
  }

  double total = 0;
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    const auto a = static_cast<std::size_t>(i - 1);  // segment into point i
    const auto b = static_cast<std::size_t>(i);      // segment out of point i
    const Vec2 v = dir[b] - dir[a];
    const double h = 0.5 * (len[a] + len[b]);
    const double vv = v.squaredNorm();
    total += vv / (h * h);
    if (!grad) continue;

    // d/d(seg) of unit direction is (I - t t^T) / len; h depends on both lengths.
    const double coef = 2.0 / (h * h);
    const double hterm = vv / (h * h * h);  // d(vv/h^2)/dh = -2 vv / h^3, times dh/dlen = 1/2
    const Vec2 proj_b = (v - dir[b] * dir[b].dot(v)) / len[b];
    const Vec2 proj_a = (v - dir[a] * dir[a].dot(v)) / len[a];
    const Vec2 d_seg_b = coef * proj_b - hterm * dir[b];
    const Vec2 d_seg_a = -coef * proj_a - hterm * dir[a];
    grad->row(i + 1) += d_seg_b.transpose();
    grad->row(i) -= d_seg_b.transpose();
    grad->row(i) += d_seg_a.transpose();
    grad->row(i - 1) -= d_seg_a.transpose();
  }
  return total;
}

double smooth_reg(const Points& path) { return smooth_reg(path, nullptr); }

Points smooth_reg_grad(const Points& path) {
  Points grad;
  smooth_reg(path, &grad);
  return grad;
}

}  // namespace amortize::geometry
