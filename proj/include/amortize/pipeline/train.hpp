#pragma once

#include "amortize/core/dataset.hpp"
#include "amortize/losses/losses.hpp"
#include "amortize/nn/mlp.hpp"
#include "amortize/pipeline/models.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace amortize::pipeline {

struct TrainConfig {
  TaskKind task = TaskKind::fiber;
  ModelKind model = ModelKind::decoder;
  int epochs = 10;
  double lr = 1e-3;
  double lr_decay = 0.95;  // multiplies lr after every epoch
  int batch_size = 1;
  /// Regulariser weight: smoothing weight on the path task, lambda2 on the
  /// arm task; unused by decoders and the ballistic task.
  double lambda = 0;
  std::uint64_t seed = 0;
  /// Hidden widths; empty vector gives a linear model.
  std::optional<std::vector<int>> hidden;
  losses::RobotCostConfig robot;  // lambda2 is taken from `lambda`

  /// Task defaults at desk scale.
  static TrainConfig defaults(TaskKind task, ModelKind model);
  nn::MlpSpec spec() const;
  void validate() const;
};

struct EpochStats {
  int epoch = 0;
  double train_loss = 0;  // mean per-sample loss over the epoch
  double val_loss = 0;    // NaN when there is no validation split
  double lr = 0;
};

struct TrainResult {
  nn::Mlp mlp;
  std::vector<EpochStats> history;
};

using EpochCallback = std::function<void(const EpochStats&)>;

/// Fits U_hat(theta) to the realisations by mean squared error.
TrainResult train_decoder(const Dataset& data, const TrainConfig& cfg, const EpochCallback& on_epoch = {});

/// Trains goal -> design through the frozen decoder on the task cost.
TrainResult train_encoder(const Dataset& data, const nn::Mlp& decoder, const TrainConfig& cfg,
                          const EpochCallback& on_epoch = {});

/// Supervised goal -> design regression plus the design regulariser. Arm
/// obstacles are redrawn every epoch clear of each sample's pose.
TrainResult train_direct_learning(const Dataset& data, const TrainConfig& cfg, const EpochCallback& on_epoch = {});

/// Dispatches on cfg.model; `decoder` is required for encoders.
TrainResult train_model(const Dataset& data, const TrainConfig& cfg, const nn::Mlp* decoder,
                        const EpochCallback& on_epoch = {});

}  // namespace amortize::pipeline
