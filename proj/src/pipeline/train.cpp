#include "amortize/pipeline/train.hpp"

#include "amortize/core/rng.hpp"
#include "amortize/geometry/arc.hpp"
#include "amortize/geometry/metrics.hpp"
#include "amortize/nn/adam.hpp"
#include "amortize/pipeline/solve.hpp"
#include "amortize/sim/arm.hpp"
#include "amortize/sim/ballistic.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace amortize::pipeline {

namespace {

constexpr double kQuarterPi = 0.25 * std::numbers::pi;
constexpr std::uint64_t kShuffleStream = 0x5407'0000;
constexpr std::uint64_t kObstacleStream = 0x0b57'0000'0000;

using Batch = std::vector<std::size_t>;
// Summed loss over the batch; adds summed parameter gradients to `grad` when
// given. Epoch 0 denotes validation (stored goals, no augmentation).
using BatchLoss = std::function<double(const Batch& batch, int epoch, const nn::Mlp& model, nn::MlpParams* grad)>;

void accumulate(nn::MlpParams* grad, const nn::Mlp& model, const nn::ForwardCache& cache,
                const Eigen::MatrixXd& output_grad) {
  if (grad) *grad += nn::backward(model, cache, output_grad).params;
}

TrainResult run_training(const Dataset& data, const TrainConfig& cfg, const BatchLoss& loss,
                         const EpochCallback& on_epoch) {
  cfg.validate();
  if (data.task != cfg.task) throw std::invalid_argument("dataset task does not match the training config");
  if (data.split.train.empty()) throw std::invalid_argument("training split is empty");

  TrainResult result;
  result.mlp = nn::init_mlp(cfg.spec(), cfg.seed);
  auto adam = nn::AdamState::for_params(result.mlp.params, cfg.lr);
  Batch order = data.split.train;
  const auto bs = static_cast<std::size_t>(cfg.batch_size);

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    Rng rng(cfg.seed, kShuffleStream + static_cast<std::uint64_t>(epoch));
    for (std::size_t i = order.size() - 1; i > 0; --i) std::swap(order[i], order[rng() % (i + 1)]);

    double total = 0;
    for (std::size_t start = 0; start < order.size(); start += bs) {
      const Batch batch(order.begin() + static_cast<std::ptrdiff_t>(start),
                        order.begin() + static_cast<std::ptrdiff_t>(std::min(order.size(), start + bs)));
      nn::MlpParams grad = result.mlp.params.zeros_like();
      const double l = loss(batch, epoch, result.mlp, &grad);
      if (!std::isfinite(l) || !grad.all_finite()) {
        throw std::runtime_error("training diverged in epoch " + std::to_string(epoch) + " at batch starting " +
                                 std::to_string(start) + " (loss " + std::to_string(l) + ")");
      }
      grad *= 1.0 / static_cast<double>(batch.size());
      nn::adam_step(result.mlp.params, grad, adam);
      total += l;
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.lr = adam.lr;
    stats.train_loss = total / static_cast<double>(order.size());
    stats.val_loss = std::numeric_limits<double>::quiet_NaN();
    if (!data.split.val.empty()) {
      double val = 0;
      for (std::size_t start = 0; start < data.split.val.size(); start += 256) {
        const Batch chunk(data.split.val.begin() + static_cast<std::ptrdiff_t>(start),
                          data.split.val.begin() +
                              static_cast<std::ptrdiff_t>(std::min(data.split.val.size(), start + 256)));
        val += loss(chunk, 0, result.mlp, nullptr);
      }
      stats.val_loss = val / static_cast<double>(data.split.val.size());
      if (!std::isfinite(stats.val_loss)) {
        throw std::runtime_error("validation loss is not finite after epoch " + std::to_string(epoch));
      }
    }
    result.history.push_back(stats);
    if (on_epoch) on_epoch(stats);
    adam.lr *= cfg.lr_decay;
  }
  return result;
}

// ---------------------------------------------------------------- ballistic

Eigen::RowVectorXd gather_scalar(const Dataset& data, const Batch& batch, Eigen::MatrixXd Sample::*field) {
  Eigen::RowVectorXd out(static_cast<Eigen::Index>(batch.size()));
  for (std::size_t b = 0; b < batch.size(); ++b) out[static_cast<Eigen::Index>(b)] = (data.samples[batch[b]].*field)(0, 0);
  return out;
}

BatchLoss ballistic_decoder_loss(const Dataset& data) {
  const double range = sim::BallisticConfig{}.max_range();
  return [&data, range](const Batch& batch, int, const nn::Mlp& model, nn::MlpParams* grad) {
    const Eigen::MatrixXd in = gather_scalar(data, batch, &Sample::design).array() - kQuarterPi;
    const Eigen::MatrixXd target = gather_scalar(data, batch, &Sample::realization) / range;
    const auto cache = nn::forward(model, in);
    const Eigen::MatrixXd r = cache.output - target;
    accumulate(grad, model, cache, 2.0 * r);
    return r.squaredNorm();
  };
}

BatchLoss ballistic_encoder_loss(const Dataset& data, const nn::Mlp& decoder) {
  const double range = sim::BallisticConfig{}.max_range();
  return [&data, &decoder, range](const Batch& batch, int, const nn::Mlp& model, nn::MlpParams* grad) {
    const Eigen::MatrixXd goal = gather_scalar(data, batch, &Sample::goal) / range;
    const auto enc = nn::forward(model, goal.array() - 0.5);
    // Decoder input is theta - pi/4, which is exactly the encoder output.
    const auto dec = nn::forward(decoder, enc.output);
    const Eigen::MatrixXd r = dec.output - goal;
    if (grad) accumulate(grad, model, enc, nn::backward_inputs(decoder, dec, 2.0 * r));
    return r.squaredNorm();
  };
}

BatchLoss ballistic_direct_loss(const Dataset& data) {
  const double range = sim::BallisticConfig{}.max_range();
  return [&data, range](const Batch& batch, int, const nn::Mlp& model, nn::MlpParams* grad) {
    const Eigen::MatrixXd goal = gather_scalar(data, batch, &Sample::goal) / range;
    const Eigen::MatrixXd target = gather_scalar(data, batch, &Sample::design).array() - kQuarterPi;
    const auto cache = nn::forward(model, goal.array() - 0.5);
    const Eigen::MatrixXd r = cache.output - target;
    accumulate(grad, model, cache, 2.0 * r);
    return r.squaredNorm();
  };
}

// -------------------------------------------------------------------- fiber

Eigen::MatrixXd goal_windows(const Points& path) {
  return geometry::arc_windows(geometry::ArcParam(path), kWindowHalf, kWindowStep);
}

BatchLoss fiber_decoder_loss(const Dataset& data) {
  return [&data](const Batch& batch, int, const nn::Mlp& model, nn::MlpParams* grad) {
    double total = 0;
    for (auto idx : batch) {
      const Sample& s = data.samples[idx];
      const Points theta = s.design;
      const auto cache = nn::forward(model, goal_windows(theta));
      const Eigen::MatrixXd r = cache.output - (s.realization - s.design).transpose();
      const double n = static_cast<double>(r.cols());
      accumulate(grad, model, cache, (2.0 / n) * r);
      total += r.squaredNorm() / n;
    }
    return total;
  };
}

BatchLoss fiber_encoder_loss(const Dataset& data, const nn::Mlp& decoder, double lambda) {
  return [&data, &decoder, lambda](const Batch& batch, int, const nn::Mlp& model, nn::MlpParams* grad) {
    double total = 0;
    for (auto idx : batch) {
      const Points g = data.samples[idx].goal;
      const auto enc = nn::forward(model, goal_windows(g));
      const Points theta = g + enc.output.transpose();
      const auto dec = nn::forward(decoder, geometry::index_windows(theta, kWindowHalf));
      const Points u = theta + dec.output.transpose();
      const auto cost = losses::path_cost(theta, u, g, lambda);
      total += cost.value;
      if (grad) {
        const Eigen::MatrixXd dwin = nn::backward_inputs(decoder, dec, cost.grad_u.transpose());
        const Points dtheta = cost.grad_theta + cost.grad_u + geometry::index_windows_adjoint(dwin, kWindowHalf);
        accumulate(grad, model, enc, dtheta.transpose());
      }
    }
    return total;
  };
}

BatchLoss fiber_direct_loss(const Dataset& data, double lambda) {
  return [&data, lambda](const Batch& batch, int, const nn::Mlp& model, nn::MlpParams* grad) {
    double total = 0;
    for (auto idx : batch) {
      const Sample& s = data.samples[idx];
      const Points g = s.goal;
      // Pair each goal point with the nozzle position that laid it.
      const Points target = geometry::take_rows(s.design, geometry::distinct_run_starts(s.realization));
      if (target.rows() != g.rows()) throw std::invalid_argument("fiber sample goal does not match its realization");
      const auto cache = nn::forward(model, goal_windows(g));
      const Eigen::MatrixXd r = cache.output - (target - g).transpose();
      Eigen::MatrixXd out_grad = 2.0 * r;
      double value = r.squaredNorm();
      if (lambda > 0) {
        Points reg_grad;
        value += lambda * geometry::smooth_reg(g + cache.output.transpose(), &reg_grad);
        out_grad += lambda * reg_grad.transpose();
      }
      accumulate(grad, model, cache, out_grad);
      total += value;
    }
    return total;
  };
}

// ---------------------------------------------------------------------- arm

Eigen::VectorXd interleaved(const Points& p) {
  Eigen::VectorXd out(p.size());
  for (Eigen::Index i = 0; i < p.rows(); ++i) out.segment<2>(2 * i) = p.row(i).transpose();
  return out;
}

Points deinterleaved(const Eigen::VectorXd& v) {
  Points out(v.size() / 2, 2);
  for (Eigen::Index i = 0; i < out.rows(); ++i) out.row(i) = v.segment<2>(2 * i).transpose();
  return out;
}

// Training goals: stored obstacle for validation, otherwise a fresh draw per
// (epoch, sample), optionally clear of the stored pose.
RobotGoal arm_training_goal(const Sample& s, std::size_t idx, int epoch, std::uint64_t seed, bool clear) {
  RobotGoal goal = RobotGoal::unpack(s.goal.col(0));
  if (epoch == 0) return goal;
  Rng rng(seed + kObstacleStream, (static_cast<std::uint64_t>(epoch) << 32) | idx);
  if (clear) {
    const RobotRealization pose{s.realization, sim::ArmConfig{}.top_mid_index()};
    goal.obstacle_center = sim::sample_obstacle(rng, &pose).center;
  } else {
    goal.obstacle_center = sim::sample_obstacle(rng).center;
  }
  return goal;
}

BatchLoss arm_decoder_loss(const Dataset& data) {
  const Points rest = sim::arm_rest_vertices();
  return [&data, rest](const Batch& batch, int, const nn::Mlp& model, nn::MlpParams* grad) {
    const auto b = static_cast<Eigen::Index>(batch.size());
    Eigen::MatrixXd in(kRobotDesignSize, b);
    Eigen::MatrixXd target(2 * rest.rows(), b);
    for (Eigen::Index k = 0; k < b; ++k) {
      const Sample& s = data.samples[batch[static_cast<std::size_t>(k)]];
      in.col(k) = s.design.col(0).array() - 1.0;
      target.col(k) = interleaved(s.realization - rest);
    }
    const auto cache = nn::forward(model, in);
    const Eigen::MatrixXd r = cache.output - target;
    const double n = static_cast<double>(r.rows());
    accumulate(grad, model, cache, (2.0 / n) * r);
    return r.squaredNorm() / n;
  };
}

BatchLoss arm_encoder_loss(const Dataset& data, const nn::Mlp& decoder, const TrainConfig& cfg) {
  const Points rest = sim::arm_rest_vertices();
  losses::RobotCostConfig cost_cfg = cfg.robot;
  cost_cfg.lambda2 = cfg.lambda;
  const std::uint64_t seed = cfg.seed;
  return [&data, &decoder, rest, cost_cfg, seed](const Batch& batch, int epoch, const nn::Mlp& model,
                                                 nn::MlpParams* grad) {
    const auto b = static_cast<Eigen::Index>(batch.size());
    std::vector<RobotGoal> goals;
    Eigen::MatrixXd in(4, b);
    for (Eigen::Index k = 0; k < b; ++k) {
      const auto idx = batch[static_cast<std::size_t>(k)];
      goals.push_back(arm_training_goal(data.samples[idx], idx, epoch, seed, false));
      in.col(k) = arm_goal_features(goals.back());
    }
    const auto enc = nn::forward(model, in);
    // Decoder input is theta - 1, which is exactly the encoder output.
    const auto dec = nn::forward(decoder, enc.output);
    const std::size_t top = sim::ArmConfig{}.top_mid_index();
    double total = 0;
    Eigen::MatrixXd dvert(dec.output.rows(), b);
    Eigen::MatrixXd dtheta(kRobotDesignSize, b);
    for (Eigen::Index k = 0; k < b; ++k) {
      const RobotRealization u{rest + deinterleaved(dec.output.col(k)), top};
      const Eigen::VectorXd theta = enc.output.col(k).array() + 1.0;
      const auto cost = losses::robot_cost(theta, u, goals[static_cast<std::size_t>(k)], cost_cfg);
      total += cost.value;
      dvert.col(k) = interleaved(cost.grad_vertices);
      dtheta.col(k) = cost.grad_theta;
    }
    if (grad) accumulate(grad, model, enc, dtheta + nn::backward_inputs(decoder, dec, dvert));
    return total;
  };
}

BatchLoss arm_direct_loss(const Dataset& data, const TrainConfig& cfg) {
  const double lambda = cfg.lambda;
  const std::uint64_t seed = cfg.seed;
  return [&data, lambda, seed](const Batch& batch, int epoch, const nn::Mlp& model, nn::MlpParams* grad) {
    const auto b = static_cast<Eigen::Index>(batch.size());
    Eigen::MatrixXd in(4, b);
    Eigen::MatrixXd target(kRobotDesignSize, b);
    for (Eigen::Index k = 0; k < b; ++k) {
      const auto idx = batch[static_cast<std::size_t>(k)];
      in.col(k) = arm_goal_features(arm_training_goal(data.samples[idx], idx, epoch, seed, true));
      target.col(k) = data.samples[idx].design.col(0).array() - 1.0;
    }
    const auto cache = nn::forward(model, in);
    const Eigen::MatrixXd r = cache.output - target;
    Eigen::MatrixXd out_grad = 2.0 * r;
    double total = r.squaredNorm();
    if (lambda > 0) {
      for (Eigen::Index k = 0; k < b; ++k) {
        Eigen::VectorXd reg_grad;
        total += lambda * losses::ratio_reg(cache.output.col(k).array() + 1.0, &reg_grad);
        out_grad.col(k) += lambda * reg_grad;
      }
    }
    accumulate(grad, model, cache, out_grad);
    return total;
  };
}

void check_decoder(TaskKind task, const nn::Mlp& decoder) {
  const auto expected = default_spec(task, ModelKind::decoder);
  if (decoder.spec.input_size() != expected.input_size() || decoder.spec.output_size() != expected.output_size()) {
    throw std::invalid_argument("decoder shape does not match the " + std::string(to_string(task)) + " task");
  }
}

}  // namespace

TrainConfig TrainConfig::defaults(TaskKind task, ModelKind model) {
  TrainConfig cfg;
  cfg.task = task;
  cfg.model = model;
  switch (task) {
    case TaskKind::ballistic:
      cfg.epochs = 60;
      cfg.lr = 3e-3;
      cfg.lr_decay = 0.97;
      cfg.batch_size = 16;
      break;
    case TaskKind::fiber:
      cfg.epochs = 10;
      cfg.lr_decay = 0.95;
      cfg.batch_size = 1;
      cfg.lambda = model == ModelKind::direct ? 0.1 : 1.5;
      break;
    case TaskKind::arm:
      cfg.epochs = 50;
      cfg.lr_decay = 0.98;
      cfg.batch_size = 8;
      cfg.lambda = 0.05;
      break;
  }
  if (model == ModelKind::decoder) cfg.lambda = 0;
  return cfg;
}

nn::MlpSpec TrainConfig::spec() const {
  return hidden ? spec_with_hidden(task, model, *hidden) : default_spec(task, model);
}

void TrainConfig::validate() const {
  if (epochs < 1) throw std::invalid_argument("epochs must be at least 1");
  if (!(lr > 0)) throw std::invalid_argument("learning rate must be positive");
  if (!(lr_decay > 0 && lr_decay <= 1)) throw std::invalid_argument("lr decay must be in (0, 1]");
  if (batch_size < 1) throw std::invalid_argument("batch size must be at least 1");
  if (!(lambda >= 0)) throw std::invalid_argument("regulariser weight must be non-negative");
  if (hidden) {
    for (int w : *hidden) {
      if (w < 1) throw std::invalid_argument("hidden widths must be positive");
    }
  }
  robot.validate();
}

TrainResult train_decoder(const Dataset& data, const TrainConfig& cfg, const EpochCallback& on_epoch) {
  switch (cfg.task) {
    case TaskKind::ballistic: return run_training(data, cfg, ballistic_decoder_loss(data), on_epoch);
    case TaskKind::fiber: return run_training(data, cfg, fiber_decoder_loss(data), on_epoch);
    case TaskKind::arm: return run_training(data, cfg, arm_decoder_loss(data), on_epoch);
  }
  throw std::invalid_argument("unknown task");
}

TrainResult train_encoder(const Dataset& data, const nn::Mlp& decoder, const TrainConfig& cfg,
                          const EpochCallback& on_epoch) {
  check_decoder(cfg.task, decoder);
  switch (cfg.task) {
    case TaskKind::ballistic: return run_training(data, cfg, ballistic_encoder_loss(data, decoder), on_epoch);
    case TaskKind::fiber: return run_training(data, cfg, fiber_encoder_loss(data, decoder, cfg.lambda), on_epoch);
    case TaskKind::arm: return run_training(data, cfg, arm_encoder_loss(data, decoder, cfg), on_epoch);
  }
  throw std::invalid_argument("unknown task");
}

TrainResult train_direct_learning(const Dataset& data, const TrainConfig& cfg, const EpochCallback& on_epoch) {
  switch (cfg.task) {
    case TaskKind::ballistic: return run_training(data, cfg, ballistic_direct_loss(data), on_epoch);
    case TaskKind::fiber: return run_training(data, cfg, fiber_direct_loss(data, cfg.lambda), on_epoch);
    case TaskKind::arm: return run_training(data, cfg, arm_direct_loss(data, cfg), on_epoch);
  }
  throw std::invalid_argument("unknown task");
}

TrainResult train_model(const Dataset& data, const TrainConfig& cfg, const nn::Mlp* decoder,
                        const EpochCallback& on_epoch) {
  switch (cfg.model) {
    case ModelKind::decoder: return train_decoder(data, cfg, on_epoch);
    case ModelKind::encoder:
      if (!decoder) throw std::invalid_argument("encoder training needs a trained decoder");
      return train_encoder(data, *decoder, cfg, on_epoch);
    case ModelKind::direct: return train_direct_learning(data, cfg, on_epoch);
  }
  throw std::invalid_argument("unknown model kind");
}

}  // namespace amortize::pipeline
