#include "amortize/sim/arm.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace amortize::sim {

void ArmConfig::validate() const {
  if (n_segments <= 0 || !(segment_height > 0) || !(width > 0)) {
    throw std::invalid_argument("arm geometry must be positive");
  }
  if (2 * n_segments != kRobotDesignSize) {
    throw std::invalid_argument("arm segment count must match the 40-ratio design");
  }
}

RobotRealization arm_realize(const RobotDesign& design, const ArmConfig& cfg) {
  cfg.validate();
  const auto& r = design.ratios();
  const int n = cfg.n_segments;
  const double h = cfg.segment_height;
  const double half_w = 0.5 * cfg.width;

  RobotRealization out;
  out.vertices.resize(cfg.vertex_count(), 2);
  out.top_mid_index = cfg.top_mid_index();

  Vec2 center = Vec2::Zero();
  double heading = 0.0;  // clockwise from +y
  auto emit_level = [&](int level) {
    // Leftward normal of direction (sin psi, cos psi).
    const Vec2 normal(-std::cos(heading), std::sin(heading));
    out.vertices.row(3 * level + 0) = (center + half_w * normal).transpose();
    out.vertices.row(3 * level + 1) = center.transpose();
    out.vertices.row(3 * level + 2) = (center - half_w * normal).transpose();
  };
  emit_level(0);
  for (int k = 0; k < n; ++k) {
    const double left = r[k];
    const double right = r[n + k];
    const double extension = h * 0.5 * (left + right);
    const double bend = h * (left - right) / cfg.width;
    const double mid = heading + 0.5 * bend;
    center += extension * Vec2(std::sin(mid), std::cos(mid));
    heading += bend;
    emit_level(k + 1);
  }
  return out;
}

Points arm_rest_vertices(const ArmConfig& cfg) { return arm_realize(RobotDesign(), cfg).vertices; }

RobotGoal arm_goal_of(const RobotRealization& realization, const Vec2& obstacle_center, double obstacle_radius) {
  realization.validate();
  RobotGoal g;
  g.target = realization.top_mid();
  g.obstacle_center = obstacle_center;
  g.obstacle_radius = obstacle_radius;
  return g;
}

double min_vertex_distance(const Points& vertices, const Vec2& center) {
  return (vertices.rowwise() - center.transpose()).rowwise().norm().minCoeff();
}

Obstacle sample_obstacle(Rng& rng, const RobotRealization* require_clear, const ObstacleSector& sector, double radius,
                         double margin) {
  const double deg = std::numbers::pi / 180.0;
  const double lo = (sector.bisector_deg - 0.5 * sector.width_deg) * deg;
  const double hi = (sector.bisector_deg + 0.5 * sector.width_deg) * deg;
  for (int attempt = 0; attempt < kMaxObstacleDraws; ++attempt) {
    const double angle = rng.uniform(lo, hi);
    const double dist = rng.uniform(sector.inner_radius, sector.outer_radius);
    Obstacle ob{Vec2(dist * std::sin(angle), dist * std::cos(angle)), radius};
    if (!require_clear || min_vertex_distance(require_clear->vertices, ob.center) >= radius + margin) return ob;
  }
  throw std::runtime_error("sample_obstacle: no clear placement after 10000 draws");
}

}  // namespace amortize::sim
