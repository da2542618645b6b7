#include "amortize/core/types.hpp"

#include <cmath>

namespace amortize {

bool all_finite(const Eigen::Ref<const Eigen::MatrixXd>& m) { return m.allFinite(); }

Path2D::Path2D(Points points) : points_(std::move(points)) { validate(points_); }

void Path2D::validate(const Points& points) {
  if (points.rows() < 2) {
    throw std::invalid_argument("path needs at least 2 points, got " + std::to_string(points.rows()));
  }
  if (!points.allFinite()) throw std::invalid_argument("path has non-finite coordinates");
  for (Eigen::Index i = 1; i < points.rows(); ++i) {
    if ((points.row(i) - points.row(i - 1)).norm() <= kMinPointSpacing) {
      throw std::invalid_argument("path points " + std::to_string(i - 1) + " and " + std::to_string(i) +
                                  " coincide");
    }
  }
}

RobotDesign::RobotDesign() : ratios_(Eigen::VectorXd::Ones(kRobotDesignSize)) {}

RobotDesign::RobotDesign(Eigen::VectorXd ratios) : ratios_(std::move(ratios)) { validate(ratios_); }

void RobotDesign::validate(const Eigen::VectorXd& ratios) {
  if (ratios.size() != kRobotDesignSize) {
    throw std::invalid_argument("robot design needs " + std::to_string(kRobotDesignSize) + " ratios, got " +
                                std::to_string(ratios.size()));
  }
  for (Eigen::Index i = 0; i < ratios.size(); ++i) {
    const double r = ratios[i];
    if (!std::isfinite(r) || r < kStretchMin || r > kStretchMax) {
      throw std::invalid_argument("stretch ratio " + std::to_string(i) + " = " + std::to_string(r) +
                                  " outside [0.8, 1.2]");
    }
  }
}

void RobotRealization::validate() const {
  if (!vertices.allFinite()) throw std::invalid_argument("realization has non-finite vertices");
  if (top_mid_index >= static_cast<std::size_t>(vertices.rows())) {
    throw std::invalid_argument("top midpoint index out of range");
  }
}

Eigen::VectorXd RobotGoal::pack() const {
  Eigen::VectorXd v(5);
  v << target.x(), target.y(), obstacle_center.x(), obstacle_center.y(), obstacle_radius;
  return v;
}

RobotGoal RobotGoal::unpack(const Eigen::VectorXd& packed) {
  if (packed.size() != 5) throw std::invalid_argument("robot goal must have 5 entries");
  RobotGoal g;
  g.target = {packed[0], packed[1]};
  g.obstacle_center = {packed[2], packed[3]};
  g.obstacle_radius = packed[4];
  if (!(g.obstacle_radius > 0)) throw std::invalid_argument("obstacle radius must be positive");
  return g;
}

}  // namespace amortize
