#include "amortize/nn/checkpoint.hpp"

#include <fstream>
#include <stdexcept>

namespace amortize::nn {

using nlohmann::json;

namespace {

json spec_to_json(const MlpSpec& spec) {
  json out = {{"layer_sizes", spec.layer_sizes}, {"activation", "relu"}};
  if (spec.output.kind == OutputMap::Kind::bounded) {
    out["output_map"] = {{"kind", "bounded"}, {"scale", spec.output.scale}};
  } else {
    out["output_map"] = {{"kind", "identity"}};
  }
  return out;
}

MlpSpec spec_from_json(const json& j) {
  MlpSpec spec;
  spec.layer_sizes = j.at("layer_sizes").get<std::vector<int>>();
  const auto& om = j.at("output_map");
  const auto kind = om.at("kind").get<std::string>();
  if (kind == "bounded") {
    spec.output = OutputMap::bounded(om.at("scale").get<double>());
  } else if (kind != "identity") {
    throw std::runtime_error("unknown output map '" + kind + "'");
  }
  spec.validate();
  return spec;
}

}  // namespace

json to_json(const Mlp& mlp) {
  json weights = json::array();
  json biases = json::array();
  for (const auto& l : mlp.params.layers) {
    std::vector<double> w;
    w.reserve(static_cast<std::size_t>(l.weight.size()));
    for (Eigen::Index r = 0; r < l.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < l.weight.cols(); ++c) w.push_back(l.weight(r, c));
    }
    weights.push_back(std::move(w));
    biases.push_back(std::vector<double>(l.bias.data(), l.bias.data() + l.bias.size()));
  }
  return {{"format_version", 1}, {"spec", spec_to_json(mlp.spec)}, {"weights", weights}, {"biases", biases}};
}

Mlp mlp_from_json(const json& j) {
  if (j.value("format_version", 0) != 1) throw std::runtime_error("unsupported checkpoint format_version");
  Mlp mlp;
  mlp.spec = spec_from_json(j.at("spec"));
  const auto& weights = j.at("weights");
  const auto& biases = j.at("biases");
  if (weights.size() != mlp.spec.num_layers() || biases.size() != mlp.spec.num_layers()) {
    throw std::runtime_error("checkpoint layer count does not match spec");
  }
  for (std::size_t k = 0; k < mlp.spec.num_layers(); ++k) {
    const int in = mlp.spec.layer_sizes[k];
    const int out = mlp.spec.layer_sizes[k + 1];
    const auto w = weights[k].get<std::vector<double>>();
    const auto b = biases[k].get<std::vector<double>>();
    if (w.size() != static_cast<std::size_t>(in) * static_cast<std::size_t>(out) ||
        b.size() != static_cast<std::size_t>(out)) {
      throw std::runtime_error("checkpoint layer " + std::to_string(k) + " has wrong size");
    }
    Layer layer{Eigen::MatrixXd(out, in), Eigen::VectorXd(out)};
    for (int r = 0; r < out; ++r) {
      for (int c = 0; c < in; ++c) layer.weight(r, c) = w[static_cast<std::size_t>(r) * in + c];
      layer.bias[r] = b[static_cast<std::size_t>(r)];
    }
    mlp.params.layers.push_back(std::move(layer));
  }
  if (!mlp.params.all_finite()) throw std::runtime_error("checkpoint contains non-finite parameters");
  return mlp;
}

void save_checkpoint(const std::filesystem::path& path, const Mlp& mlp, const json& meta) {
  json j = to_json(mlp);
  if (!meta.empty()) j["meta"] = meta;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << j.dump() << '\n';
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

Mlp load_checkpoint(const std::filesystem::path& path, json* meta) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  const json j = json::parse(in);
  if (meta) *meta = j.value("meta", json::object());
  return mlp_from_json(j);
}

std::uint64_t parameter_hash(const MlpParams& params) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const double* data, Eigen::Index n) {
    const auto* bytes = reinterpret_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < static_cast<std::size_t>(n) * sizeof(double); ++i) {
      h ^= bytes[i];
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& l : params.layers) {
    mix(l.weight.data(), l.weight.size());
    mix(l.bias.data(), l.bias.size());
  }
  return h;
}

}  // namespace amortize::nn
