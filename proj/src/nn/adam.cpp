#include "amortize/nn/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace amortize::nn {

AdamState AdamState::for_params(const MlpParams& params, double lr) {
  AdamState s;
  s.first_moment = params.zeros_like();
  s.second_moment = params.zeros_like();
  s.lr = lr;
  return s;
}

namespace {

template <typename Tensor>
void update(Tensor& p, const Tensor& g, Tensor& m, Tensor& v, const AdamState& s, double c1, double c2) {
  m = s.beta1 * m + (1.0 - s.beta1) * g;
  v = s.beta2 * v + (1.0 - s.beta2) * g.cwiseAbs2();
  p.array() -= s.lr * (m.array() / c1) / ((v.array() / c2).sqrt() + s.eps);
}

}  // namespace

void adam_step(MlpParams& params, const MlpParams& grads, AdamState& state) {
  if (grads.layers.size() != params.layers.size() || state.first_moment.layers.size() != params.layers.size()) {
    throw std::invalid_argument("Adam: gradient/state shape mismatch");
  }
  if (!grads.all_finite()) throw std::runtime_error("Adam: non-finite gradient");
  ++state.step;
  const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  for (std::size_t k = 0; k < params.layers.size(); ++k) {
    auto& p = params.layers[k];
    const auto& g = grads.layers[k];
    auto& m = state.first_moment.layers[k];
    auto& v = state.second_moment.layers[k];
    if (g.weight.rows() != p.weight.rows() || g.weight.cols() != p.weight.cols() || g.bias.size() != p.bias.size()) {
      throw std::invalid_argument("Adam: gradient shape mismatch");
    }
    update(p.weight, g.weight, m.weight, v.weight, state, c1, c2);
    update(p.bias, g.bias, m.bias, v.bias, state, c1, c2);
  }
}

}  // namespace amortize::nn
