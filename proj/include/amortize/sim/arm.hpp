#pragma once

#include "amortize/core/rng.hpp"
#include "amortize/core/types.hpp"

namespace amortize::sim {

/// Constant-curvature segment chain standing in for the soft arm FEM model.
/// Vertices: 3 columns (left edge, centreline, right edge) per level, levels
/// 0..n_segments bottom to top; vertex index = 3 * level + column.
struct ArmConfig {
  int n_segments = 20;
  double segment_height = 0.5;
  double width = 0.5;

  int vertex_count() const { return 3 * (n_segments + 1); }
  std::size_t top_mid_index() const { return static_cast<std::size_t>(3 * n_segments + 1); }
  double height() const { return n_segments * segment_height; }
  void validate() const;
};

/// Segment k extends by h (a_k + b_k) / 2 and bends by h (a_k - b_k) / w
/// (positive turns toward +x). Each segment's chord follows the orientation at
/// its midpoint. Base row fixed at (-w/2, 0), (0, 0), (w/2, 0).
RobotRealization arm_realize(const RobotDesign& design, const ArmConfig& cfg = {});

/// Undeformed mesh (all ratios 1).
Points arm_rest_vertices(const ArmConfig& cfg = {});

RobotGoal arm_goal_of(const RobotRealization& realization, const Vec2& obstacle_center,
                      double obstacle_radius = kDefaultObstacleRadius);

/// Annular sector where obstacle centres are drawn, anchored at the arm base.
struct ObstacleSector {
  double inner_radius = 4.0;
  double outer_radius = 5.0;
  double bisector_deg = 45.0;  // from vertical toward +x
  double width_deg = 60.0;
};

struct Obstacle {
  Vec2 center = Vec2::Zero();
  double radius = kDefaultObstacleRadius;
};

inline constexpr double kDefaultBarrierMargin = 0.1;
inline constexpr int kMaxObstacleDraws = 10000;

/// Centre uniform in angle and radius over the sector. With `require_clear`,
/// redraws until every vertex is at least radius + margin from the centre;
/// throws std::runtime_error after kMaxObstacleDraws attempts.
Obstacle sample_obstacle(Rng& rng, const RobotRealization* require_clear = nullptr, const ObstacleSector& sector = {},
                         double radius = kDefaultObstacleRadius, double margin = kDefaultBarrierMargin);

/// Smallest distance from any vertex to `center`.
double min_vertex_distance(const Points& vertices, const Vec2& center);

}  // namespace amortize::sim
