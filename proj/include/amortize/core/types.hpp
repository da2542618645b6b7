#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace amortize {

/// Row i is point i; column 0 is x, column 1 is y.
using Points = Eigen::MatrixX2d;
using Vec2 = Eigen::Vector2d;

/// Minimum separation of consecutive path points.
inline constexpr double kMinPointSpacing = 1e-12;

/// Ordered polyline with at least two finite, pairwise-distinct neighbours.
///
/// Realizations of the fiber process may stall (consecutive duplicates), so
/// they are carried as raw `Points`; `Path2D` is reserved for designs and
/// other inputs that must satisfy the polyline invariants.
class Path2D {
 public:
  Path2D() = default;
  explicit Path2D(Points points);

  const Points& points() const noexcept { return points_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(points_.rows()); }
  Vec2 operator[](std::size_t i) const { return points_.row(static_cast<Eigen::Index>(i)).transpose(); }

  /// Throws std::invalid_argument describing the first violated invariant.
  static void validate(const Points& points);

 private:
  Points points_;
};

inline constexpr int kRobotDesignSize = 40;
inline constexpr double kStretchMin = 0.8;
inline constexpr double kStretchMax = 1.2;

/// Stretch ratios: first half left side bottom-to-top, second half right side.
class RobotDesign {
 public:
  RobotDesign();  // rest design, all ratios 1
  explicit RobotDesign(Eigen::VectorXd ratios);

  const Eigen::VectorXd& ratios() const noexcept { return ratios_; }
  Eigen::Ref<const Eigen::VectorXd> left() const { return ratios_.head(kRobotDesignSize / 2); }
  Eigen::Ref<const Eigen::VectorXd> right() const { return ratios_.tail(kRobotDesignSize / 2); }

  static void validate(const Eigen::VectorXd& ratios);

 private:
  Eigen::VectorXd ratios_;
};

struct RobotRealization {
  Points vertices;
  std::size_t top_mid_index = 0;

  Vec2 top_mid() const { return vertices.row(static_cast<Eigen::Index>(top_mid_index)).transpose(); }
  void validate() const;
};

inline constexpr double kDefaultObstacleRadius = 0.9;

struct RobotGoal {
  Vec2 target = Vec2::Zero();
  Vec2 obstacle_center = Vec2::Zero();
  double obstacle_radius = kDefaultObstacleRadius;

  /// (target, obstacle centre, radius) as a 5-vector.
  Eigen::VectorXd pack() const;
  static RobotGoal unpack(const Eigen::VectorXd& packed);
};

bool all_finite(const Eigen::Ref<const Eigen::MatrixXd>& m);

}  // namespace amortize
