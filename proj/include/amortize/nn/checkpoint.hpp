#pragma once

#include "amortize/nn/mlp.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace amortize::nn {

/// {"format_version":1, "spec":{...}, "weights":[[...]], "biases":[[...]]}
/// Weights are row-major per layer. Extra keys (e.g. "meta") are preserved by
/// callers that read the object back with `nlohmann::json`.
nlohmann::json to_json(const Mlp& mlp);
Mlp mlp_from_json(const nlohmann::json& j);

void save_checkpoint(const std::filesystem::path& path, const Mlp& mlp,
                     const nlohmann::json& meta = nlohmann::json::object());
Mlp load_checkpoint(const std::filesystem::path& path, nlohmann::json* meta = nullptr);

/// FNV-1a over the raw parameter bytes; used to verify frozen networks.
std::uint64_t parameter_hash(const MlpParams& params);

}  // namespace amortize::nn
