#pragma once

#include "amortize/core/rng.hpp"
#include "amortize/nn/mlp.hpp"

#include <Eigen/Core>

#include <cmath>

namespace amortize::testing {

/// Random spec with 1-4 hidden layers of width <= 32.
inline nn::MlpSpec random_spec(Rng& rng, bool allow_bounded = true) {
  nn::MlpSpec spec;
  const int hidden = 1 + static_cast<int>(rng() % 4);
  spec.layer_sizes.push_back(1 + static_cast<int>(rng() % 6));
  for (int i = 0; i < hidden; ++i) spec.layer_sizes.push_back(1 + static_cast<int>(rng() % 32));
  spec.layer_sizes.push_back(1 + static_cast<int>(rng() % 4));
  if (allow_bounded && rng() % 2 == 0) spec.output = nn::OutputMap::bounded(rng.uniform(0.1, 2.0));
  return spec;
}

/// He-uniform weights plus small random biases so every unit is exercised.
inline nn::Mlp random_mlp(Rng& rng, bool allow_bounded = true) {
  auto mlp = nn::init_mlp(random_spec(rng, allow_bounded), rng());
  for (auto& layer : mlp.params.layers) {
    for (Eigen::Index i = 0; i < layer.bias.size(); ++i) layer.bias[i] = rng.uniform(-0.3, 0.3);
  }
  return mlp;
}

inline Eigen::VectorXd random_vector(Rng& rng, Eigen::Index n, double scale = 1.0) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = scale * rng.normal();
  return v;
}

/// Smallest |pre-activation| over hidden ReLU units for one input.
inline double min_relu_margin(const nn::Mlp& mlp, const Eigen::VectorXd& x) {
  double margin = INFINITY;
  Eigen::VectorXd a = x;
  const auto& layers = mlp.params.layers;
  for (std::size_t k = 0; k + 1 < layers.size(); ++k) {
    const Eigen::VectorXd z = layers[k].weight * a + layers[k].bias;
    margin = std::min(margin, z.cwiseAbs().minCoeff());
    a = z.cwiseMax(0.0);
  }
  return margin;
}

}  // namespace amortize::testing
