#pragma once

#include "amortize/core/rng.hpp"

#include <Eigen/Core>

namespace amortize::sampling {

/// exp(-sin^2((x - x') / 2) / (2 l^2)); 2*pi-periodic, 1 on the diagonal.
double periodic_kernel(double x, double x_prime, double length_scale);

/// Zero-mean GP on the grid t_i = 2 pi i / n with the periodic kernel.
class GpPrior {
 public:
  /// Jitter starts at 1e-10 and grows tenfold until the Cholesky factorisation
  /// succeeds; throws std::runtime_error past 1e-6.
  GpPrior(int n_points, double length_scale);

  int size() const { return static_cast<int>(grid_.size()); }
  double length_scale() const { return length_scale_; }
  double jitter() const { return jitter_; }
  const Eigen::VectorXd& grid() const { return grid_; }
  const Eigen::MatrixXd& gram() const { return gram_; }
  const Eigen::MatrixXd& cholesky() const { return chol_; }

  /// L z for a given standard-normal vector z.
  Eigen::VectorXd transform(const Eigen::VectorXd& z) const;

 private:
  double length_scale_;
  double jitter_ = 0;
  Eigen::VectorXd grid_;
  Eigen::MatrixXd gram_;  // without jitter
  Eigen::MatrixXd chol_;  // lower factor of gram + jitter I
};

/// One prior draw L z with z ~ N(0, I) taken from `rng`.
Eigen::VectorXd gp_prior_sample(const GpPrior& prior, Rng& rng);

}  // namespace amortize::sampling
