#include "amortize/sampling/gp.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace amortize::sampling {

double periodic_kernel(double x, double x_prime, double length_scale) {
  const double s = std::sin(0.5 * (x - x_prime));
  return std::exp(-(s * s) / (2.0 * length_scale * length_scale));
}

GpPrior::GpPrior(int n_points, double length_scale) : length_scale_(length_scale) {
  if (n_points < 1) throw std::invalid_argument("GP prior needs at least one grid point");
  if (!(length_scale > 0)) throw std::invalid_argument("GP length scale must be positive");
  grid_.resize(n_points);
  for (int i = 0; i < n_points; ++i) grid_[i] = 2.0 * std::numbers::pi * i / n_points;
  gram_.resize(n_points, n_points);
  for (int i = 0; i < n_points; ++i) {
    for (int j = 0; j < n_points; ++j) gram_(i, j) = periodic_kernel(grid_[i], grid_[j], length_scale);
  }

  for (double jitter = 1e-10; jitter <= 1e-6 * (1 + 1e-9); jitter *= 10) {
    Eigen::MatrixXd k = gram_;
    k.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(k);
    if (llt.info() == Eigen::Success) {
      jitter_ = jitter;
      chol_ = llt.matrixL();
      return;
    }
  }
  throw std::runtime_error("GP Gram matrix is not positive definite even with jitter 1e-6");
}

Eigen::VectorXd GpPrior::transform(const Eigen::VectorXd& z) const {
  if (z.size() != grid_.size()) throw std::invalid_argument("GP transform: size mismatch");
  return chol_.triangularView<Eigen::Lower>() * z;
}

Eigen::VectorXd gp_prior_sample(const GpPrior& prior, Rng& rng) {
  Eigen::VectorXd z(prior.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.normal();
  return prior.transform(z);
}

}  // namespace amortize::sampling
