#include "amortize/pipeline/solve.hpp"

#include "amortize/geometry/arc.hpp"
#include "amortize/pipeline/models.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace amortize::pipeline {

namespace {

constexpr double kQuarterPi = 0.25 * std::numbers::pi;

Eigen::VectorXd flatten(const Points& p) { return Eigen::Map<const Eigen::VectorXd>(p.data(), p.size()); }

Points unflatten(const Eigen::VectorXd& v) { return Eigen::Map<const Points>(v.data(), v.size() / 2, 2); }

// Vertex displacements are stored interleaved (x0, y0, x1, y1, ...).
Eigen::VectorXd interleave(const Points& p) {
  Eigen::VectorXd out(p.size());
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    out[2 * i] = p(i, 0);
    out[2 * i + 1] = p(i, 1);
  }
  return out;
}

Points deinterleave(const Eigen::VectorXd& v) {
  Points out(v.size() / 2, 2);
  for (Eigen::Index i = 0; i < out.rows(); ++i) out.row(i) << v[2 * i], v[2 * i + 1];
  return out;
}

void require_task(const nn::Mlp& mlp, int in, int out, const char* what) {
  if (mlp.spec.input_size() != in || mlp.spec.output_size() != out) {
    throw std::invalid_argument(std::string(what) + ": network shape does not match the task");
  }
}

// ratio = 1 + a * tanh(z / 2); returns d ratio / dz alongside.
Eigen::VectorXd squash(const Eigen::VectorXd& z, Eigen::VectorXd* dratio) {
  const Eigen::ArrayXd t = (0.5 * z.array()).tanh();
  if (dratio) *dratio = 0.5 * kArmRatioBound * (1.0 - t.square());
  return (1.0 + kArmRatioBound * t).matrix();
}

DirectOptResult finish(const optim::BfgsResult& res, double f0, Eigen::MatrixXd design) {
  DirectOptResult out;
  out.design = std::move(design);
  out.objective = res.f_opt;
  out.initial_objective = f0;
  out.iterations = res.iterations;
  out.termination = res.termination;
  out.warning = res.termination == optim::Termination::line_search_failed;
  return out;
}

DirectOptResult optimize_ballistic(double goal, const nn::Mlp& decoder, const DirectOptConfig& cfg) {
  const double range = cfg.ballistic.max_range();
  const double target = goal / range;
  auto angle = [](double z, double* dangle) {
    const double t = std::tanh(0.5 * z);
    if (dangle) *dangle = 0.5 * kQuarterPi * (1.0 - t * t);
    return kQuarterPi + kQuarterPi * t;
  };
  optim::Objective f = [&](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
    double dangle = 0;
    const double theta = angle(x[0], &dangle);
    const Eigen::MatrixXd in = Eigen::MatrixXd::Constant(1, 1, theta - kQuarterPi);
    const auto cache = nn::forward(decoder, in);
    const double r = cache.output(0, 0) - target;
    const Eigen::MatrixXd g_in = nn::backward_inputs(decoder, cache, Eigen::MatrixXd::Constant(1, 1, 2.0 * r));
    grad[0] = g_in(0, 0) * dangle;
    return r * r;
  };
  // Start on the low branch: the range is stationary at pi/4.
  Eigen::VectorXd x0(1);
  x0[0] = 2.0 * std::atanh(-0.5);
  Eigen::VectorXd g0(1);
  const double f0 = f(x0, g0);
  const auto res = optim::bfgs_minimize(f, x0, cfg.bfgs);
  return finish(res, f0, Eigen::MatrixXd::Constant(1, 1, angle(res.x_opt[0], nullptr)));
}

DirectOptResult optimize_path(const Points& goal, const nn::Mlp& decoder, const DirectOptConfig& cfg) {
  optim::Objective f = [&](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
    const Points theta = unflatten(x);
    const Eigen::MatrixXd windows = geometry::index_windows(theta, kWindowHalf);
    const auto cache = nn::forward(decoder, windows);
    const Points u = theta + cache.output.transpose();
    Points grad_u;
    Points grad_theta;
    double value = losses::do_distance(goal, u, cfg.n_quad, &grad_u);
    value += cfg.lambda_do * losses::do_reg(theta, &grad_theta);
    grad_theta *= cfg.lambda_do;
    grad_theta += grad_u;
    const Eigen::MatrixXd dwin = nn::backward_inputs(decoder, cache, grad_u.transpose());
    grad_theta += geometry::index_windows_adjoint(dwin, kWindowHalf);
    grad = flatten(grad_theta);
    return value;
  };
  const Eigen::VectorXd x0 = flatten(goal);
  Eigen::VectorXd g0(x0.size());
  const double f0 = f(x0, g0);
  const auto res = optim::bfgs_minimize(f, x0, cfg.bfgs);
  return finish(res, f0, unflatten(res.x_opt));
}

DirectOptResult optimize_arm(const RobotGoal& goal, const nn::Mlp& decoder, const DirectOptConfig& cfg) {
  const Points rest = sim::arm_rest_vertices(cfg.arm);
  const std::size_t top = cfg.arm.top_mid_index();
  optim::Objective f = [&](const Eigen::VectorXd& z, Eigen::VectorXd& grad) {
    Eigen::VectorXd dratio;
    const Eigen::VectorXd theta = squash(z, &dratio);
    const auto cache = nn::forward(decoder, theta.array() - 1.0);
    RobotRealization u{rest + deinterleave(cache.output.col(0)), top};
    const auto cost = losses::robot_cost(theta, u, goal, cfg.robot);
    const Eigen::MatrixXd dtheta = nn::backward_inputs(decoder, cache, interleave(cost.grad_vertices));
    grad = ((dtheta.col(0) + cost.grad_theta).array() * dratio.array()).matrix();
    return cost.value;
  };
  const Eigen::VectorXd z0 = Eigen::VectorXd::Zero(kRobotDesignSize);
  Eigen::VectorXd g0(z0.size());
  const double f0 = f(z0, g0);
  const auto res = optim::bfgs_minimize(f, z0, cfg.bfgs);
  return finish(res, f0, squash(res.x_opt, nullptr));
}

}  // namespace

double ballistic_encode(const nn::Mlp& encoder, double goal, const sim::BallisticConfig& cfg) {
  require_task(encoder, 1, 1, "ballistic_encode");
  Eigen::VectorXd in(1);
  in[0] = goal / cfg.max_range() - 0.5;
  return kQuarterPi + nn::predict(encoder, in)[0];
}

double ballistic_decode(const nn::Mlp& decoder, double theta, const sim::BallisticConfig& cfg) {
  require_task(decoder, 1, 1, "ballistic_decode");
  Eigen::VectorXd in(1);
  in[0] = theta - kQuarterPi;
  return nn::predict(decoder, in)[0] * cfg.max_range();
}

Points path_encode(const nn::Mlp& encoder, const Points& goal) {
  require_task(encoder, kWindowFeatures, 2, "path_encode");
  const geometry::ArcParam param(goal);
  const auto cache = nn::forward(encoder, geometry::arc_windows(param, kWindowHalf, kWindowStep));
  return goal + cache.output.transpose();
}

Points path_decode(const nn::Mlp& decoder, const Points& theta) {
  require_task(decoder, kWindowFeatures, 2, "path_decode");
  const auto cache = nn::forward(decoder, geometry::index_windows(theta, kWindowHalf));
  return theta + cache.output.transpose();
}

Eigen::Vector4d arm_goal_features(const RobotGoal& goal) {
  Eigen::Vector4d f;
  f << goal.target, goal.obstacle_center;
  return kArmGoalScale * f;
}

Eigen::VectorXd arm_encode(const nn::Mlp& encoder, const RobotGoal& goal) {
  require_task(encoder, 4, kRobotDesignSize, "arm_encode");
  return (nn::predict(encoder, arm_goal_features(goal)).array() + 1.0).matrix();
}

Points arm_decode(const nn::Mlp& decoder, const Eigen::VectorXd& ratios, const sim::ArmConfig& cfg) {
  require_task(decoder, kRobotDesignSize, 2 * cfg.vertex_count(), "arm_decode");
  return sim::arm_rest_vertices(cfg) + deinterleave(nn::predict(decoder, ratios.array() - 1.0));
}

DirectOptResult direct_optimize(TaskKind task, const Eigen::MatrixXd& goal, const nn::Mlp& decoder,
                                const DirectOptConfig& cfg) {
  cfg.bfgs.validate();
  switch (task) {
    case TaskKind::ballistic:
      require_task(decoder, 1, 1, "direct_optimize");
      return optimize_ballistic(goal(0, 0), decoder, cfg);
    case TaskKind::fiber:
      require_task(decoder, kWindowFeatures, 2, "direct_optimize");
      return optimize_path(goal, decoder, cfg);
    case TaskKind::arm:
      require_task(decoder, kRobotDesignSize, 2 * cfg.arm.vertex_count(), "direct_optimize");
      return optimize_arm(RobotGoal::unpack(goal.col(0)), decoder, cfg);
  }
  throw std::invalid_argument("direct_optimize: unknown task");
}

Method network_method(TaskKind task, const nn::Mlp& model) {
  switch (task) {
    case TaskKind::ballistic:
      return [model](const Eigen::MatrixXd& goal) {
        return Eigen::MatrixXd::Constant(1, 1, ballistic_encode(model, goal(0, 0)));
      };
    case TaskKind::fiber:
      return [model](const Eigen::MatrixXd& goal) { return Eigen::MatrixXd(path_encode(model, goal)); };
    case TaskKind::arm:
      return [model](const Eigen::MatrixXd& goal) {
        return Eigen::MatrixXd(arm_encode(model, RobotGoal::unpack(goal.col(0))));
      };
  }
  throw std::invalid_argument("network_method: unknown task");
}

Method direct_method(TaskKind task, const nn::Mlp& decoder, const DirectOptConfig& cfg) {
  return [task, decoder, cfg](const Eigen::MatrixXd& goal) { return direct_optimize(task, goal, decoder, cfg).design; };
}

Method identity_method() {
  return [](const Eigen::MatrixXd& goal) { return goal; };
}

Method rest_method() {
  return [](const Eigen::MatrixXd&) { return Eigen::MatrixXd(Eigen::VectorXd::Ones(kRobotDesignSize)); };
}

}  // namespace amortize::pipeline
