#pragma once

#include "amortize/core/dataset.hpp"
#include "amortize/losses/losses.hpp"
#include "amortize/nn/mlp.hpp"
#include "amortize/optim/bfgs.hpp"
#include "amortize/sim/arm.hpp"
#include "amortize/sim/ballistic.hpp"

#include <functional>

namespace amortize::pipeline {

/// Maps a goal to a design, both in the layout `Sample` uses for the task.
using Method = std::function<Eigen::MatrixXd(const Eigen::MatrixXd& goal)>;

// Network application per task. Path networks work on sliding windows and
// predict offsets from the window centre.
double ballistic_encode(const nn::Mlp& encoder, double goal, const sim::BallisticConfig& cfg = {});
double ballistic_decode(const nn::Mlp& decoder, double theta, const sim::BallisticConfig& cfg = {});
/// Windows are taken along the goal's arc length.
Points path_encode(const nn::Mlp& encoder, const Points& goal);
/// Windows are taken by index, so theta should be roughly uniformly spaced.
Points path_decode(const nn::Mlp& decoder, const Points& theta);
Eigen::VectorXd arm_encode(const nn::Mlp& encoder, const RobotGoal& goal);
Points arm_decode(const nn::Mlp& decoder, const Eigen::VectorXd& ratios, const sim::ArmConfig& cfg = {});

/// Encoder input for an arm goal: scaled target and obstacle centre.
Eigen::Vector4d arm_goal_features(const RobotGoal& goal);

struct DirectOptConfig {
  optim::BfgsConfig bfgs;
  double lambda_do = 6e-4;
  int n_quad = 256;
  losses::RobotCostConfig robot;
  sim::BallisticConfig ballistic;
  sim::ArmConfig arm;
};

struct DirectOptResult {
  Eigen::MatrixXd design;
  double objective = 0;
  double initial_objective = 0;
  int iterations = 0;
  optim::Termination termination = optim::Termination::max_iter;
  bool warning = false;  // the line search gave up before convergence
};

/// BFGS over the design through the frozen decoder.
///
/// ballistic: angle through a bounded map, started on the low branch (pi/8);
/// fiber: all point coordinates, started at the goal, cost do_distance +
/// lambda_do * do_reg; arm: unconstrained z with ratios 1 + 0.2 (2 sigmoid(z) - 1),
/// started at z = 0, cost robot_cost.
DirectOptResult direct_optimize(TaskKind task, const Eigen::MatrixXd& goal, const nn::Mlp& decoder,
                                const DirectOptConfig& cfg = {});

/// Encoder and direct-learning networks share this interface.
Method network_method(TaskKind task, const nn::Mlp& model);
Method direct_method(TaskKind task, const nn::Mlp& decoder, const DirectOptConfig& cfg = {});
/// Design = goal (path task "no planning" baseline).
Method identity_method();
/// Always the all-ones arm design.
Method rest_method();

}  // namespace amortize::pipeline
