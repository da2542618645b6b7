#pragma once

#include "amortize/core/rng.hpp"

#include <Eigen/Core>

#include <functional>

namespace amortize::sampling {

using LogLikelihood = std::function<double(const Eigen::VectorXd&)>;

struct EssOutcome {
  Eigen::VectorXd state;
  int proposals = 0;
};

/// One elliptical slice sampling transition around a zero-mean Gaussian prior.
///
/// `prior_sample` is the auxiliary draw nu. Random draws happen in this order:
/// slice height u ~ U(0,1), initial angle ~ U(0, 2 pi), then one uniform per
/// shrink. Throws std::invalid_argument if `current` has log_lik = -inf.
EssOutcome ess_transition(const Eigen::VectorXd& current, const Eigen::VectorXd& prior_sample,
                          const LogLikelihood& log_lik, Rng& rng);

inline Eigen::VectorXd ess_step(const Eigen::VectorXd& current, const Eigen::VectorXd& prior_sample,
                                const LogLikelihood& log_lik, Rng& rng) {
  return ess_transition(current, prior_sample, log_lik, rng).state;
}

}  // namespace amortize::sampling
