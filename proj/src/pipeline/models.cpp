#include "amortize/pipeline/models.hpp"

#include "amortize/nn/checkpoint.hpp"

#include <numbers>
#include <stdexcept>

namespace amortize::pipeline {

using nlohmann::json;

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::decoder: return "decoder";
    case ModelKind::encoder: return "encoder";
    case ModelKind::direct: return "direct";
  }
  return "unknown";
}

ModelKind parse_model(std::string_view name) {
  if (name == "decoder") return ModelKind::decoder;
  if (name == "encoder") return ModelKind::encoder;
  if (name == "direct") return ModelKind::direct;
  throw std::invalid_argument("unknown model kind '" + std::string(name) + "'");
}

namespace {

std::vector<int> default_hidden(TaskKind task) {
  switch (task) {
    case TaskKind::ballistic: return {32, 32};
    case TaskKind::fiber: return {500, 200, 100, 50, 25};
    case TaskKind::arm: return {128, 256, 128};
  }
  return {};
}

}  // namespace

nn::MlpSpec spec_with_hidden(TaskKind task, ModelKind kind, const std::vector<int>& hidden) {
  nn::MlpSpec spec;
  int in = 0;
  int out = 0;
  switch (task) {
    case TaskKind::ballistic:
      in = 1;
      out = 1;
      if (kind != ModelKind::decoder) spec.output = nn::OutputMap::bounded(0.25 * std::numbers::pi);
      break;
    case TaskKind::fiber:
      in = kWindowFeatures;
      out = 2;
      break;
    case TaskKind::arm:
      if (kind == ModelKind::decoder) {
        in = 40;
        out = 2 * 63;
      } else {
        in = 4;
        out = 40;
        spec.output = nn::OutputMap::bounded(kArmRatioBound);
      }
      break;
  }
  spec.layer_sizes.push_back(in);
  spec.layer_sizes.insert(spec.layer_sizes.end(), hidden.begin(), hidden.end());
  spec.layer_sizes.push_back(out);
  spec.validate();
  return spec;
}

nn::MlpSpec default_spec(TaskKind task, ModelKind kind) { return spec_with_hidden(task, kind, default_hidden(task)); }

json ModelInfo::to_json() const {
  return {{"task", std::string(amortize::to_string(task))},
          {"model", std::string(pipeline::to_string(kind))},
          {"seed", seed},
          {"lambda", lambda}};
}

ModelInfo ModelInfo::from_json(const json& j) {
  ModelInfo info;
  info.task = parse_task(j.at("task").get<std::string>());
  info.kind = parse_model(j.at("model").get<std::string>());
  info.seed = j.value("seed", std::uint64_t{0});
  info.lambda = j.value("lambda", 0.0);
  return info;
}

void save_model(const std::string& path, const Model& model) { nn::save_checkpoint(path, model.mlp, model.info.to_json()); }

Model load_model(const std::string& path) {
  json meta;
  Model model;
  model.mlp = nn::load_checkpoint(path, &meta);
  if (meta.is_null() || !meta.contains("task")) throw std::runtime_error(path + ": checkpoint has no model metadata");
  model.info = ModelInfo::from_json(meta);
  return model;
}

}  // namespace amortize::pipeline
