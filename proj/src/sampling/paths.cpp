#include "amortize/sampling/paths.hpp"

#include "amortize/core/parallel.hpp"
#include "amortize/sampling/ess.hpp"
#include "amortize/sampling/gp.hpp"
#include "amortize/sampling/intersect.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace amortize::sampling {

Points unit_circle(int n_points) {
  Points p(n_points, 2);
  for (int i = 0; i < n_points; ++i) {
    const double t = 2.0 * std::numbers::pi * i / n_points;
    p(i, 0) = std::cos(t);
    p(i, 1) = std::sin(t);
  }
  return p;
}

std::vector<Path2D> generate_paths(int count, const PathSamplerConfig& config, std::uint64_t seed) {
  if (count <= 0) throw std::invalid_argument("generate_paths: count must be positive");
  if (config.n_points < 4) throw std::invalid_argument("generate_paths: need at least 4 points per path");
  if (config.iters_per_path < 0) throw std::invalid_argument("generate_paths: negative iteration count");

  const GpPrior prior(config.n_points, config.length_scale);
  const Points circle = unit_circle(config.n_points);
  const Eigen::Index n = config.n_points;

  auto to_path = [&](const Eigen::VectorXd& deviation) {
    Points p = circle;
    p.col(0) += deviation.head(n);
    p.col(1) += deviation.tail(n);
    return p;
  };
  const LogLikelihood log_lik = [&](const Eigen::VectorXd& deviation) {
    return self_intersects(to_path(deviation)) ? -std::numeric_limits<double>::infinity() : 0.0;
  };

  std::vector<Path2D> out(static_cast<std::size_t>(count));
  parallel_for(static_cast<std::size_t>(count), [&](std::size_t k) {
    Rng rng(seed, k);
    Eigen::VectorXd deviation = Eigen::VectorXd::Zero(2 * n);
    Eigen::VectorXd nu(2 * n);
    for (int it = 0; it < config.iters_per_path; ++it) {
      nu.head(n) = gp_prior_sample(prior, rng);
      nu.tail(n) = gp_prior_sample(prior, rng);
      deviation = ess_step(deviation, nu, log_lik, rng);
    }
    Points p = to_path(deviation);
    if (self_intersects(p)) throw std::logic_error("generate_paths produced a self-intersecting path");
    out[k] = Path2D(std::move(p));
  });
  return out;
}

}  // namespace amortize::sampling
