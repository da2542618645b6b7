#include "amortize/sampling/ess.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace amortize::sampling {

EssOutcome ess_transition(const Eigen::VectorXd& current, const Eigen::VectorXd& prior_sample,
                          const LogLikelihood& log_lik, Rng& rng) {
  if (current.size() != prior_sample.size()) throw std::invalid_argument("ESS: state/prior size mismatch");
  const double current_ll = log_lik(current);
  if (!(current_ll > -std::numeric_limits<double>::infinity())) {
    throw std::invalid_argument("ESS: current state is infeasible");
  }
  const double threshold = current_ll + std::log(rng.uniform01());

  double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
  double lo = angle - 2.0 * std::numbers::pi;
  double hi = angle;
  EssOutcome out;
  for (;;) {
    ++out.proposals;
    Eigen::VectorXd proposal = current * std::cos(angle) + prior_sample * std::sin(angle);
    if (log_lik(proposal) > threshold) {
      out.state = std::move(proposal);
      return out;
    }
    if (angle < 0) {
      lo = angle;
    } else {
      hi = angle;
    }
    // The bracket always contains 0, where the proposal equals `current`.
    if (hi - lo < 1e-14) {
      out.state = current;
      return out;
    }
    angle = rng.uniform(lo, hi);
  }
}

}  // namespace amortize::sampling
