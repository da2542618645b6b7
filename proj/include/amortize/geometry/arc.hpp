#pragma once

#include "amortize/core/types.hpp"

#include <Eigen/Core>

#include <vector>

namespace amortize::geometry {

/// Piecewise-linear arc-length parameterisation of a polyline.
///
/// Queries clamp: f(s < 0) = f(0) and f(s > S) = f(S). Zero-length segments
/// (stalled fiber points) are tolerated; the cumulative lengths are then only
/// non-decreasing and f(s_i) returns the shared location.
class ArcParam {
 public:
  explicit ArcParam(Points points);

  double length() const { return cumulative_.back(); }
  const std::vector<double>& cumulative() const { return cumulative_; }
  const Points& points() const { return points_; }
  std::size_t size() const { return cumulative_.size(); }

  Vec2 at(double s) const;

 private:
  Points points_;
  std::vector<double> cumulative_;
};

/// n_out points at arc fractions k / (n_out - 1); endpoints copied exactly.
Points resample(const Points& path, int n_out);
Path2D resample(const Path2D& path, int n_out);

/// Walks along the path from its start, placing each point where the path
/// first leaves the circle of radius `chord` around the previous one. Stops
/// when the rest of the path stays inside that circle, so the tail shorter
/// than one chord is dropped. Every chord has the same length, which makes
/// the result a fixed point of `resample` at its own point count. Throws if
/// the path never gets `chord` away from its start.
Points chord_walk(const Points& path, double chord);

/// Point count giving spacing closest to `spacing` along the whole path.
int count_for_spacing(double length, double spacing);

/// [f(c + i s0) - f(c)] for i = -m..m, interleaved (x, y); length 2(2m + 1).
Eigen::VectorXd window_features(const ArcParam& param, double center_s, int m, double s0);

/// Column i is the arc-length window centred on source point i.
Eigen::MatrixXd arc_windows(const ArcParam& param, int m, double s0);

/// Column i holds p[clamp(i + k)] - p[i] for k = -m..m. Matches `arc_windows`
/// on paths sampled at uniform spacing s0, and is linear in the points.
Eigen::MatrixXd index_windows(const Points& points, int m);

/// Adjoint of `index_windows`: maps a feature gradient back to the points.
Points index_windows_adjoint(const Eigen::MatrixXd& feature_grad, int m);

/// Polyline length.
double path_length(const Points& points);

/// Index of the first point of every run of repeated points (neighbours
/// closer than `tol`). Row 0 is always kept.
std::vector<Eigen::Index> distinct_run_starts(const Points& points, double tol = kMinPointSpacing);

Points take_rows(const Points& points, const std::vector<Eigen::Index>& rows);

}  // namespace amortize::geometry
