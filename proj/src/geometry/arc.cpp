#include "amortize/geometry/arc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace amortize::geometry {

ArcParam::ArcParam(Points points) : points_(std::move(points)) {
  if (points_.rows() < 2) throw std::invalid_argument("arc parameterisation needs at least 2 points");
  if (!points_.allFinite()) throw std::invalid_argument("arc parameterisation needs finite points");
  cumulative_.resize(static_cast<std::size_t>(points_.rows()));
  cumulative_[0] = 0.0;
  for (Eigen::Index i = 1; i < points_.rows(); ++i) {
    cumulative_[static_cast<std::size_t>(i)] =
        cumulative_[static_cast<std::size_t>(i - 1)] + (points_.row(i) - points_.row(i - 1)).norm();
  }
  if (!(length() > 0)) throw std::invalid_argument("degenerate zero-length path");
}

Vec2 ArcParam::at(double s) const {
  if (s <= 0) return points_.row(0).transpose();
  if (s >= length()) return points_.row(points_.rows() - 1).transpose();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
  const auto j = static_cast<Eigen::Index>(it - cumulative_.begin()) - 1;
  const double seg = cumulative_[static_cast<std::size_t>(j + 1)] - cumulative_[static_cast<std::size_t>(j)];
  const double t = (s - cumulative_[static_cast<std::size_t>(j)]) / seg;
  return (points_.row(j) + t * (points_.row(j + 1) - points_.row(j))).transpose();
}

Points resample(const Points& path, int n_out) {
  if (n_out < 2) throw std::invalid_argument("resample needs n_out >= 2");
  const ArcParam param(path);
  Points out(n_out, 2);
  const double total = param.length();
  for (int k = 0; k < n_out; ++k) {
    out.row(k) = param.at(total * static_cast<double>(k) / static_cast<double>(n_out - 1)).transpose();
  }
  out.row(0) = path.row(0);
  out.row(n_out - 1) = path.row(path.rows() - 1);
  return out;
}

Path2D resample(const Path2D& path, int n_out) { return Path2D(resample(path.points(), n_out)); }

Points chord_walk(const Points& path, double chord) {
  if (!(chord > 0) || !std::isfinite(chord)) throw std::invalid_argument("chord_walk needs a positive chord");
  if (path.rows() < 2 || !path.allFinite()) throw std::invalid_argument("chord_walk needs at least 2 finite points");
  const Eigen::Index last = path.rows() - 1;
  std::vector<Vec2> out{path.row(0).transpose()};
  Eigen::Index seg = 0;
  double t = 0;  // position within segment seg, as a fraction
  for (;;) {
    const Vec2 c = out.back();
    bool found = false;
    for (; seg < last; ++seg, t = 0) {
      const Vec2 a = path.row(seg).transpose();
      const Vec2 d = path.row(seg + 1).transpose() - a;
      const double dd = d.squaredNorm();
      if (dd == 0) continue;
      // The walk is inside the circle here, so the exit is the larger root.
      const Vec2 ac = a - c;
      const double b = ac.dot(d);
      const double disc = b * b - dd * (ac.squaredNorm() - chord * chord);
      if (disc < 0) continue;
      const double root = (-b + std::sqrt(disc)) / dd;
      if (root >= t && root <= 1.0) {
        t = root;
        out.push_back(a + root * d);
        found = true;
        break;
      }
    }
    if (!found) break;
  }
  if (out.size() < 2) throw std::invalid_argument("chord_walk: path never leaves the first circle");
  Points result(static_cast<Eigen::Index>(out.size()), 2);
  for (std::size_t i = 0; i < out.size(); ++i) result.row(static_cast<Eigen::Index>(i)) = out[i].transpose();
  return result;
}

int count_for_spacing(double length, double spacing) {
  if (!(spacing > 0)) throw std::invalid_argument("spacing must be positive");
  return std::max(2, static_cast<int>(std::lround(length / spacing)) + 1);
}

Eigen::VectorXd window_features(const ArcParam& param, double center_s, int m, double s0) {
  Eigen::VectorXd out(2 * (2 * m + 1));
  const Vec2 center = param.at(center_s);
  for (int i = -m; i <= m; ++i) {
    const Vec2 d = i == 0 ? Vec2::Zero() : Vec2(param.at(center_s + i * s0) - center);
    out.segment<2>(2 * (i + m)) = d;
  }
  return out;
}

Eigen::MatrixXd arc_windows(const ArcParam& param, int m, double s0) {
  const auto n = static_cast<Eigen::Index>(param.size());
  Eigen::MatrixXd out(2 * (2 * m + 1), n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.col(i) = window_features(param, param.cumulative()[static_cast<std::size_t>(i)], m, s0);
  }
  return out;
}

Eigen::MatrixXd index_windows(const Points& points, int m) {
  const Eigen::Index n = points.rows();
  Eigen::MatrixXd out(2 * (2 * m + 1), n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int k = -m; k <= m; ++k) {
      const Eigen::Index j = std::clamp<Eigen::Index>(i + k, 0, n - 1);
      out(2 * (k + m), i) = points(j, 0) - points(i, 0);
      out(2 * (k + m) + 1, i) = points(j, 1) - points(i, 1);
    }
  }
  return out;
}

Points index_windows_adjoint(const Eigen::MatrixXd& feature_grad, int m) {
  if (feature_grad.rows() != 2 * (2 * m + 1)) throw std::invalid_argument("window gradient has wrong row count");
  const Eigen::Index n = feature_grad.cols();
  Points grad = Points::Zero(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int k = -m; k <= m; ++k) {
      const Eigen::Index j = std::clamp<Eigen::Index>(i + k, 0, n - 1);
      const double gx = feature_grad(2 * (k + m), i);
      const double gy = feature_grad(2 * (k + m) + 1, i);
      grad(j, 0) += gx;
      grad(j, 1) += gy;
      grad(i, 0) -= gx;
      grad(i, 1) -= gy;
    }
  }
  return grad;
}

double path_length(const Points& points) {
  double total = 0;
  for (Eigen::Index i = 1; i < points.rows(); ++i) total += (points.row(i) - points.row(i - 1)).norm();
  return total;
}

std::vector<Eigen::Index> distinct_run_starts(const Points& points, double tol) {
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    if (keep.empty() || (points.row(i) - points.row(keep.back())).norm() > tol) keep.push_back(i);
  }
  return keep;
}

Points take_rows(const Points& points, const std::vector<Eigen::Index>& rows) {
  Points out(static_cast<Eigen::Index>(rows.size()), 2);
  for (std::size_t k = 0; k < rows.size(); ++k) out.row(static_cast<Eigen::Index>(k)) = points.row(rows[k]);
  return out;
}

}  // namespace amortize::geometry
