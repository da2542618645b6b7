#pragma once

#include <Eigen/Core>

#include <functional>
#include <string_view>

namespace amortize::optim {

/// Returns f(x) and writes the gradient into `grad` (already sized like x).
using Objective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd& grad)>;

/// Observes every accepted iterate, starting with x0 at iteration 0.
using IterationCallback = std::function<void(int iteration, const Eigen::VectorXd& x, double f,
                                             const Eigen::VectorXd& grad)>;

struct BfgsConfig {
  double gradient_tolerance = 1e-7;  // infinity norm
  int max_iterations = 1000;
  double c1 = 1e-4;
  double c2 = 0.9;
  int max_line_search_steps = 25;
  // When an accepted trial step is further than this (relative) from the cubic
  // model minimiser along the search line, that minimiser is also tried.
  double step_refine_tolerance = 1e-4;

  void validate() const;
};

enum class Termination { converged, max_iter, line_search_failed };

std::string_view to_string(Termination t);

struct BfgsResult {
  Eigen::VectorXd x_opt;
  double f_opt = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  Termination termination = Termination::max_iter;
  int f_evals = 0;
};

/// Dense-inverse-Hessian BFGS with a strong-Wolfe line search.
///
/// Updates are skipped (and the approximation reset to identity) when
/// s'y <= 1e-10 |s||y|. Throws std::invalid_argument if the objective is
/// not finite at x0; later failures are reported through `termination`.
BfgsResult bfgs_minimize(const Objective& objective, Eigen::VectorXd x0, const BfgsConfig& config = {},
                         const IterationCallback& callback = {});

/// Central differences (f(x + h e_i) - f(x - h e_i)) / 2h.
Eigen::VectorXd finite_diff_grad(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x,
                                 double h = 1e-6);

}  // namespace amortize::optim
