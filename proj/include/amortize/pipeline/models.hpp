#pragma once

#include "amortize/core/dataset.hpp"
#include "amortize/nn/mlp.hpp"

#include <json.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace amortize::pipeline {

enum class ModelKind { decoder, encoder, direct };
std::string_view to_string(ModelKind kind);
ModelKind parse_model(std::string_view name);

// Sliding-window geometry for the path networks.
inline constexpr int kWindowHalf = 30;
inline constexpr double kWindowStep = 0.03;
inline constexpr int kWindowFeatures = 2 * (2 * kWindowHalf + 1);

// Network input/output conventions.
inline constexpr double kArmRatioBound = 0.2;
inline constexpr double kArmGoalScale = 0.1;  // goal coordinates are multiplied by this

/// Default layer sizes for a task/model pair. `hidden` overrides the hidden
/// widths when given; an empty override with `use_override` yields a linear map.
nn::MlpSpec default_spec(TaskKind task, ModelKind kind);
nn::MlpSpec spec_with_hidden(TaskKind task, ModelKind kind, const std::vector<int>& hidden);

/// Metadata saved beside the weights in a checkpoint.
struct ModelInfo {
  TaskKind task = TaskKind::fiber;
  ModelKind kind = ModelKind::decoder;
  std::uint64_t seed = 0;
  double lambda = 0;
  nlohmann::json to_json() const;
  static ModelInfo from_json(const nlohmann::json& j);
};

struct Model {
  nn::Mlp mlp;
  ModelInfo info;
};

void save_model(const std::string& path, const Model& model);
Model load_model(const std::string& path);

}  // namespace amortize::pipeline
