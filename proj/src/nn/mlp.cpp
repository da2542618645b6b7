#include "amortize/nn/mlp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace amortize::nn {

void MlpSpec::validate() const {
  if (layer_sizes.size() < 2) throw std::invalid_argument("MLP needs at least input and output sizes");
  for (int s : layer_sizes) {
    if (s <= 0) throw std::invalid_argument("MLP layer sizes must be positive");
  }
  if (output.kind == OutputMap::Kind::bounded && !(output.scale > 0)) {
    throw std::invalid_argument("bounded output map needs a positive scale");
  }
}

MlpParams MlpParams::zeros_like() const {
  MlpParams z;
  z.layers.reserve(layers.size());
  for (const auto& l : layers) {
    z.layers.push_back({Eigen::MatrixXd::Zero(l.weight.rows(), l.weight.cols()), Eigen::VectorXd::Zero(l.bias.size())});
  }
  return z;
}

std::size_t MlpParams::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += static_cast<std::size_t>(l.weight.size() + l.bias.size());
  return n;
}

bool MlpParams::all_finite() const {
  for (const auto& l : layers) {
    if (!l.weight.allFinite() || !l.bias.allFinite()) return false;
  }
  return true;
}

bool MlpParams::operator==(const MlpParams& other) const {
  if (layers.size() != other.layers.size()) return false;
  for (std::size_t k = 0; k < layers.size(); ++k) {
    const auto& a = layers[k];
    const auto& b = other.layers[k];
    if (a.weight.rows() != b.weight.rows() || a.weight.cols() != b.weight.cols() || a.bias.size() != b.bias.size()) {
      return false;
    }
    if (a.weight != b.weight || a.bias != b.bias) return false;
  }
  return true;
}

MlpParams& MlpParams::operator+=(const MlpParams& other) {
  for (std::size_t k = 0; k < layers.size(); ++k) {
    layers[k].weight += other.layers[k].weight;
    layers[k].bias += other.layers[k].bias;
  }
  return *this;
}

MlpParams& MlpParams::operator*=(double s) {
  for (auto& l : layers) {
    l.weight *= s;
    l.bias *= s;
  }
  return *this;
}

Mlp init_mlp(const MlpSpec& spec, std::uint64_t seed) {
  spec.validate();
  Rng rng(seed, 0x1417u);
  Mlp mlp{spec, {}};
  for (std::size_t k = 0; k < spec.num_layers(); ++k) {
    const int fan_in = spec.layer_sizes[k];
    const int fan_out = spec.layer_sizes[k + 1];
    const double bound = std::sqrt(6.0 / fan_in);
    Layer layer{Eigen::MatrixXd(fan_out, fan_in), Eigen::VectorXd::Zero(fan_out)};
    // Row-major fill order so the draw sequence matches the checkpoint layout.
    for (int r = 0; r < fan_out; ++r) {
      for (int c = 0; c < fan_in; ++c) layer.weight(r, c) = rng.uniform(-bound, bound);
    }
    mlp.params.layers.push_back(std::move(layer));
  }
  return mlp;
}

namespace {

void check_shapes(const Mlp& mlp) {
  const auto& spec = mlp.spec;
  if (mlp.params.layers.size() != spec.num_layers()) throw std::invalid_argument("MLP parameter/spec layer mismatch");
  for (std::size_t k = 0; k < spec.num_layers(); ++k) {
    const auto& l = mlp.params.layers[k];
    if (l.weight.cols() != spec.layer_sizes[k] || l.weight.rows() != spec.layer_sizes[k + 1] ||
        l.bias.size() != spec.layer_sizes[k + 1]) {
      throw std::invalid_argument("MLP layer " + std::to_string(k) + " has wrong shape");
    }
  }
}

// 2 * sigmoid(z) - 1 == tanh(z / 2). Saturated values are pulled strictly inside (-a, a).
double bounded_value(double z, double a) {
  double y = a * std::tanh(0.5 * z);
  if (y >= a) y = std::nextafter(a, 0.0);
  if (y <= -a) y = std::nextafter(-a, 0.0);
  return y;
}

double bounded_derivative(double z, double a) {
  const double t = std::tanh(0.5 * z);
  return 0.5 * a * (1.0 - t * t);
}

}  // namespace

ForwardCache forward(const Mlp& mlp, const Eigen::MatrixXd& inputs) {
  check_shapes(mlp);
  if (inputs.rows() != mlp.spec.input_size()) {
    throw std::invalid_argument("MLP input has " + std::to_string(inputs.rows()) + " rows, expected " +
                                std::to_string(mlp.spec.input_size()));
  }
  if (!inputs.allFinite()) throw std::invalid_argument("MLP input is not finite");

  const auto& layers = mlp.params.layers;
  ForwardCache cache;
  cache.layer_inputs.reserve(layers.size());
  cache.layer_inputs.push_back(inputs);
  for (std::size_t k = 0; k + 1 < layers.size(); ++k) {
    Eigen::MatrixXd z = layers[k].weight * cache.layer_inputs.back();
    z.colwise() += layers[k].bias;
    cache.layer_inputs.push_back(z.cwiseMax(0.0));
  }
  cache.output_pre = layers.back().weight * cache.layer_inputs.back();
  cache.output_pre.colwise() += layers.back().bias;

  if (mlp.spec.output.kind == OutputMap::Kind::bounded) {
    const double a = mlp.spec.output.scale;
    cache.output = cache.output_pre.unaryExpr([a](double z) { return bounded_value(z, a); });
  } else {
    cache.output = cache.output_pre;
  }
  return cache;
}

Eigen::VectorXd predict(const Mlp& mlp, const Eigen::VectorXd& input) {
  return forward(mlp, input).output.col(0);
}

namespace {

Eigen::MatrixXd output_delta(const Mlp& mlp, const ForwardCache& cache, const Eigen::MatrixXd& output_grad) {
  if (output_grad.rows() != cache.output.rows() || output_grad.cols() != cache.output.cols()) {
    throw std::invalid_argument("output gradient shape does not match forward output");
  }
  if (mlp.spec.output.kind == OutputMap::Kind::bounded) {
    const double a = mlp.spec.output.scale;
    return output_grad.cwiseProduct(cache.output_pre.unaryExpr([a](double z) { return bounded_derivative(z, a); }));
  }
  return output_grad;
}

template <bool WithParams>
void reverse_pass(const Mlp& mlp, const ForwardCache& cache, const Eigen::MatrixXd& output_grad,
                  MlpParams* param_grads, Eigen::MatrixXd& input_grad) {
  const auto& layers = mlp.params.layers;
  if (cache.layer_inputs.size() != layers.size()) throw std::invalid_argument("forward cache does not match MLP");
  Eigen::MatrixXd delta = output_delta(mlp, cache, output_grad);
  for (std::size_t k = layers.size(); k-- > 0;) {
    const auto& a = cache.layer_inputs[k];
    if constexpr (WithParams) {
      param_grads->layers[k].weight.noalias() = delta * a.transpose();
      param_grads->layers[k].bias = delta.rowwise().sum();
    }
    Eigen::MatrixXd upstream = layers[k].weight.transpose() * delta;
    if (k == 0) {
      input_grad = std::move(upstream);
    } else {
      // ReLU'(0) is taken as 0; a > 0 exactly when the pre-activation was > 0.
      delta = upstream.cwiseProduct((a.array() > 0.0).cast<double>().matrix());
    }
  }
}

}  // namespace

Gradients backward(const Mlp& mlp, const ForwardCache& cache, const Eigen::MatrixXd& output_grad) {
  Gradients g;
  g.params = mlp.params.zeros_like();
  reverse_pass<true>(mlp, cache, output_grad, &g.params, g.inputs);
  return g;
}

Eigen::MatrixXd backward_inputs(const Mlp& mlp, const ForwardCache& cache, const Eigen::MatrixXd& output_grad) {
  Eigen::MatrixXd input_grad;
  reverse_pass<false>(mlp, cache, output_grad, nullptr, input_grad);
  return input_grad;
}

}  // namespace amortize::nn
