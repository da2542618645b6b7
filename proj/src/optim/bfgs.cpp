#include "amortize/optim/bfgs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace amortize::optim {

void BfgsConfig::validate() const {
  if (!(0 < c1 && c1 < c2 && c2 < 1)) throw std::invalid_argument("BFGS requires 0 < c1 < c2 < 1");
  if (!(gradient_tolerance > 0)) throw std::invalid_argument("BFGS gradient tolerance must be positive");
  if (max_iterations < 0 || max_line_search_steps < 1) throw std::invalid_argument("BFGS iteration limits invalid");
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::converged: return "converged";
    case Termination::max_iter: return "max_iter";
    case Termination::line_search_failed: return "line_search_failed";
  }
  return "unknown";
}

namespace {

struct Trial {
  double alpha = 0;
  double f = 0;
  double slope = 0;  // directional derivative g(x + alpha p) . p
  Eigen::VectorXd x;
  Eigen::VectorXd g;
};

// Minimiser of the cubic matching values and slopes at a and b.
std::optional<double> cubic_minimizer(double a, double fa, double da, double b, double fb, double db) {
  const double d1 = da + db - 3.0 * (fa - fb) / (a - b);
  const double disc = d1 * d1 - da * db;
  if (!(disc >= 0)) return std::nullopt;
  const double d2 = std::copysign(std::sqrt(disc), b - a);
  const double denom = db - da + 2.0 * d2;
  if (denom == 0) return std::nullopt;
  const double t = b - (b - a) * (db + d2 - d1) / denom;
  if (!std::isfinite(t)) return std::nullopt;
  return t;
}

class LineSearch {
 public:
  LineSearch(const Objective& objective, const BfgsConfig& cfg, const Eigen::VectorXd& x, double f0,
             const Eigen::VectorXd& p, double slope0, int& evals)
      : objective_(objective), cfg_(cfg), x_(x), f0_(f0), p_(p), d0_(slope0), evals_(evals) {}

  std::optional<Trial> run(double alpha_init) {
    Trial prev{0.0, f0_, d0_, x_, {}};
    double alpha = alpha_init;
    for (int i = 0; budget_left(); ++i) {
      Trial cur = evaluate(alpha);
      if (!sufficient_decrease(cur) || (i > 0 && cur.f >= prev.f)) return zoom(prev, cur);
      if (curvature_ok(cur)) return refine(cur);
      if (cur.slope >= 0) return zoom(cur, prev);
      prev = std::move(cur);
      alpha *= 2.0;
    }
    return std::nullopt;
  }

 private:
  bool budget_left() const { return used_ < cfg_.max_line_search_steps; }

  Trial evaluate(double alpha) {
    ++used_;
    ++evals_;
    Trial t;
    t.alpha = alpha;
    t.x = x_ + alpha * p_;
    t.g.resize(t.x.size());
    t.f = objective_(t.x, t.g);
    if (!std::isfinite(t.f) || !t.g.allFinite()) {
      t.f = std::numeric_limits<double>::infinity();
      t.slope = std::numeric_limits<double>::quiet_NaN();
    } else {
      t.slope = t.g.dot(p_);
    }
    return t;
  }

  // Near a minimiser the Armijo decrease drops below the rounding error of f.
  // There the approximate condition of Hager and Zhang is used instead: f
  // may not rise beyond rounding, and the slope bound implies Armijo for the
  // local quadratic model.
  bool sufficient_decrease(const Trial& t) const {
    if (t.f <= f0_ + cfg_.c1 * t.alpha * d0_) return true;
    return t.f <= f0_ + kRoundoff * std::abs(f0_) && t.slope <= (2.0 * cfg_.c1 - 1.0) * d0_;
  }
  static constexpr double kRoundoff = 1e-14;
  bool curvature_ok(const Trial& t) const { return std::abs(t.slope) <= -cfg_.c2 * d0_; }
  bool wolfe(const Trial& t) const { return std::isfinite(t.f) && sufficient_decrease(t) && curvature_ok(t); }

  Trial refine(Trial accepted) {
    if (!budget_left()) return accepted;
    const auto guess = cubic_minimizer(0.0, f0_, d0_, accepted.alpha, accepted.f, accepted.slope);
    if (!guess || *guess <= 0 || *guess > 10.0 * accepted.alpha) return accepted;
    if (std::abs(*guess - accepted.alpha) <= cfg_.step_refine_tolerance * accepted.alpha) return accepted;
    Trial alt = evaluate(*guess);
    if (wolfe(alt) && alt.f < accepted.f) return alt;
    return accepted;
  }

  std::optional<Trial> zoom(Trial lo, Trial hi) {
    while (budget_left()) {
      const double a = std::min(lo.alpha, hi.alpha);
      const double b = std::max(lo.alpha, hi.alpha);
      const double width = b - a;
      if (width <= 1e-16 * std::max(1.0, b)) break;
      double alpha = 0.5 * (a + b);
      if (std::isfinite(hi.f) && std::isfinite(hi.slope)) {
        if (auto c = cubic_minimizer(lo.alpha, lo.f, lo.slope, hi.alpha, hi.f, hi.slope);
            c && *c > a + 0.1 * width && *c < b - 0.1 * width) {
          alpha = *c;
        }
      }
      Trial cur = evaluate(alpha);
      if (!sufficient_decrease(cur) || cur.f >= lo.f) {
        hi = std::move(cur);
      } else {
        if (curvature_ok(cur)) return cur;
        if (cur.slope * (hi.alpha - lo.alpha) >= 0) hi = lo;
        lo = std::move(cur);
      }
    }
    return std::nullopt;
  }

  const Objective& objective_;
  const BfgsConfig& cfg_;
  const Eigen::VectorXd& x_;
  double f0_;
  const Eigen::VectorXd& p_;
  double d0_;
  int& evals_;
  int used_ = 0;
};

}  // namespace

BfgsResult bfgs_minimize(const Objective& objective, Eigen::VectorXd x0, const BfgsConfig& config,
                         const IterationCallback& callback) {
  config.validate();
  const Eigen::Index n = x0.size();
  BfgsResult result;
  Eigen::VectorXd x = std::move(x0);
  Eigen::VectorXd g(n);
  double f = objective(x, g);
  result.f_evals = 1;
  if (!std::isfinite(f) || !g.allFinite()) throw std::invalid_argument("BFGS: objective not finite at x0");
  if (callback) callback(0, x, f, g);

  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n);
  bool fresh = true;  // h is an (unscaled) identity
  result.termination = Termination::max_iter;

  auto finish = [&](Termination t) {
    result.x_opt = x;
    result.f_opt = f;
    result.grad_norm = n > 0 ? g.lpNorm<Eigen::Infinity>() : 0.0;
    result.termination = t;
    return result;
  };

  for (int iter = 0;; ++iter) {
    if (n == 0 || g.lpNorm<Eigen::Infinity>() <= config.gradient_tolerance) return finish(Termination::converged);
    if (iter >= config.max_iterations) return finish(Termination::max_iter);

    Eigen::VectorXd p = -(h * g);
    double slope = g.dot(p);
    if (!(slope < 0)) {
      h.setIdentity();
      fresh = true;
      p = -g;
      slope = g.dot(p);
    }

    std::optional<Trial> step = LineSearch(objective, config, x, f, p, slope, result.f_evals).run(1.0);
    if (!step && !fresh) {
      h.setIdentity();
      fresh = true;
      p = -g;
      slope = g.dot(p);
      step = LineSearch(objective, config, x, f, p, slope, result.f_evals).run(1.0);
    }
    if (!step) return finish(Termination::line_search_failed);

    const Eigen::VectorXd s = step->x - x;
    const Eigen::VectorXd y = step->g - g;
    x = std::move(step->x);
    f = step->f;
    g = std::move(step->g);
    result.iterations = iter + 1;
    if (callback) callback(result.iterations, x, f, g);

    const double sy = s.dot(y);
    if (sy <= 1e-10 * s.norm() * y.norm()) {
      h.setIdentity();
      fresh = true;
      continue;
    }
    if (fresh) {
      h *= sy / y.squaredNorm();
      fresh = false;
    }
    const double rho = 1.0 / sy;
    const Eigen::VectorXd hy = h * y;
    const double yhy = y.dot(hy);
    h.noalias() -= rho * (s * hy.transpose() + hy * s.transpose());
    h.noalias() += (rho * rho * yhy + rho) * (s * s.transpose());
  }
}

Eigen::VectorXd finite_diff_grad(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x,
                                 double h) {
  Eigen::VectorXd grad(x.size());
  Eigen::VectorXd probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double fp = f(probe);
    probe[i] = x[i] - h;
    const double fm = f(probe);
    probe[i] = x[i];
    if (!std::isfinite(fp) || !std::isfinite(fm)) {
      throw std::runtime_error("finite difference: non-finite function value");
    }
    grad[i] = (fp - fm) / (2.0 * h);
  }
  return grad;
}

}  // namespace amortize::optim
