#pragma once

#include "amortize/core/types.hpp"

#include <Eigen/Core>

namespace amortize::losses {

struct PathCostConfig {
  double lambda = 0.1;        // smoothing weight for encoder / direct-learning
  double lambda_do = 6e-4;    // evenness weight for direct optimisation
  void validate() const;
};

struct RobotCostConfig {
  double lambda1 = 0.5;   // barrier weight
  double lambda2 = 0.05;  // ratio smoothness weight
  double margin = 0.1;    // barrier activates within radius + margin
  void validate() const;
};

struct PathCostResult {
  double value = 0;
  Points grad_theta;
  Points grad_u;
};

/// ||g - u||^2 summed over all coordinates plus lambda * smooth_reg(theta).
/// The regulariser is skipped when lambda is 0, so theta may then be any size.
PathCostResult path_cost(const Points& theta, const Points& u, const Points& g, double lambda);

/// Midpoint-rule estimate of the integral over x in [0, 1] of
/// ||f_g(x S_g) - f_u(x S_u)||^2, f being the arc-length parameterisation.
/// The gradient includes the dependence of S_u and the segment breakpoints
/// on u.
double do_distance(const Points& g, const Points& u, int n_quad = 256, Points* grad_u = nullptr);

/// (1 / S) * sum_i ||(t_{i+1} - 2 t_i + t_{i-1}) / 2||^2, S the path length.
double do_reg(const Points& theta, Points* grad = nullptr);

/// (1/m) sum_i max(radius + margin - |u_i - c|, 0)^2. A vertex exactly on the
/// centre contributes the full penalty with zero gradient.
double barrier(const Points& vertices, const Vec2& center, double radius, double margin, Points* grad = nullptr);

/// Mean squared half second difference of the stretch ratios, each side on
/// its own (boundary and seam entries excluded), normalised by n - 4.
double ratio_reg(const Eigen::VectorXd& theta, Eigen::VectorXd* grad = nullptr);

struct RobotCostResult {
  double value = 0;
  double reach = 0;    // 0.5 * |target - top_mid|^2
  double barrier = 0;  // unweighted
  double reg = 0;      // unweighted
  Eigen::VectorXd grad_theta;
  Points grad_vertices;
};

/// Reach term + lambda1 * barrier + lambda2 * ratio_reg. The obstacle radius
/// comes from the goal.
RobotCostResult robot_cost(const Eigen::VectorXd& theta, const RobotRealization& u, const RobotGoal& goal,
                           const RobotCostConfig& cfg = {});

}  // namespace amortize::losses
