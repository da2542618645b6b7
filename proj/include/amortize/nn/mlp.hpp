#pragma once

#include "amortize/core/rng.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace amortize::nn {

/// Final-layer map. `bounded(a)` emits a * (2 * sigmoid(z) - 1), strictly inside (-a, a).
struct OutputMap {
  enum class Kind { identity, bounded };
  Kind kind = Kind::identity;
  double scale = 1.0;

  static OutputMap identity() { return {}; }
  static OutputMap bounded(double a) { return {Kind::bounded, a}; }

  bool operator==(const OutputMap&) const = default;
};

/// Fully connected network, ReLU between hidden layers.
struct MlpSpec {
  std::vector<int> layer_sizes;
  OutputMap output;

  int input_size() const { return layer_sizes.front(); }
  int output_size() const { return layer_sizes.back(); }
  std::size_t num_layers() const { return layer_sizes.size() - 1; }
  void validate() const;

  bool operator==(const MlpSpec&) const = default;
};

struct Layer {
  Eigen::MatrixXd weight;  // out x in
  Eigen::VectorXd bias;    // out
};

/// Parameter tensors. Gradients and Adam moments reuse the same shape.
struct MlpParams {
  std::vector<Layer> layers;

  MlpParams zeros_like() const;
  std::size_t parameter_count() const;
  bool all_finite() const;
  bool operator==(const MlpParams& other) const;
  MlpParams& operator+=(const MlpParams& other);
  MlpParams& operator*=(double s);
};

struct Mlp {
  MlpSpec spec;
  MlpParams params;
};

/// Activations kept by `forward` for the matching `backward` call.
/// Columns are batch elements.
struct ForwardCache {
  std::vector<Eigen::MatrixXd> layer_inputs;  // input to layer k (post-ReLU for k > 0)
  Eigen::MatrixXd output_pre;                 // final pre-activation
  Eigen::MatrixXd output;
};

struct Gradients {
  MlpParams params;        // summed over the batch
  Eigen::MatrixXd inputs;  // one column per batch element
};

/// He-uniform weights U(-sqrt(6/fan_in), sqrt(6/fan_in)), zero biases.
Mlp init_mlp(const MlpSpec& spec, std::uint64_t seed);

/// Batched forward; `inputs` is input_size x batch.
ForwardCache forward(const Mlp& mlp, const Eigen::MatrixXd& inputs);

/// Single-vector convenience wrapper.
Eigen::VectorXd predict(const Mlp& mlp, const Eigen::VectorXd& input);

/// Reverse-mode pass for sum_b <output_grad_b, output_b>.
Gradients backward(const Mlp& mlp, const ForwardCache& cache, const Eigen::MatrixXd& output_grad);

/// Input gradient only; used through frozen networks.
Eigen::MatrixXd backward_inputs(const Mlp& mlp, const ForwardCache& cache, const Eigen::MatrixXd& output_grad);

}  // namespace amortize::nn
