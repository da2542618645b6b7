#pragma once

#include "amortize/nn/mlp.hpp"

namespace amortize::nn {

struct AdamState {
  MlpParams first_moment;
  MlpParams second_moment;
  long step = 0;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  static AdamState for_params(const MlpParams& params, double lr);
};

/// Bias-corrected Adam update. Throws std::runtime_error on non-finite gradients.
void adam_step(MlpParams& params, const MlpParams& grads, AdamState& state);

}  // namespace amortize::nn
