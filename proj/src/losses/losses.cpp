#include "amortize/losses/losses.hpp"

#include "amortize/geometry/arc.hpp"
#include "amortize/geometry/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace amortize::losses {

void PathCostConfig::validate() const {
  if (!(lambda >= 0) || !(lambda_do >= 0)) throw std::invalid_argument("path cost weights must be non-negative");
}

void RobotCostConfig::validate() const {
  if (!(lambda1 >= 0) || !(lambda2 >= 0) || !(margin >= 0)) {
    throw std::invalid_argument("robot cost weights must be non-negative");
  }
}

PathCostResult path_cost(const Points& theta, const Points& u, const Points& g, double lambda) {
  if (g.rows() != u.rows()) {
    throw std::invalid_argument("path_cost: goal has " + std::to_string(g.rows()) + " points, realization has " +
                                std::to_string(u.rows()));
  }
  if (!(lambda >= 0)) throw std::invalid_argument("path_cost: lambda must be non-negative");
  PathCostResult out;
  const Points diff = u - g;
  out.value = diff.squaredNorm();
  out.grad_u = 2.0 * diff;
  out.grad_theta = Points::Zero(theta.rows(), 2);
  if (lambda > 0) {
    Points reg_grad;
    out.value += lambda * geometry::smooth_reg(theta, &reg_grad);
    out.grad_theta = lambda * reg_grad;
  }
  return out;
}

namespace {

std::vector<double> cumulative_lengths(const Points& p) {
  std::vector<double> c(static_cast<std::size_t>(p.rows()), 0.0);
  for (Eigen::Index i = 1; i < p.rows(); ++i) {
    c[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i - 1)] + (p.row(i) - p.row(i - 1)).norm();
  }
  return c;
}

// Unit direction of each segment; zero for zero-length segments.
Points segment_directions(const Points& p) {
  Points d(p.rows() - 1, 2);
  for (Eigen::Index i = 0; i + 1 < p.rows(); ++i) {
    const Vec2 seg = (p.row(i + 1) - p.row(i)).transpose();
    const double len = seg.norm();
    d.row(i) = (len > 0 ? Vec2(seg / len) : Vec2::Zero()).transpose();
  }
  return d;
}

// Adds coefficient[i] * d(len_i)/d(points) to grad.
void scatter_length_gradient(const std::vector<double>& coefficient, const Points& dirs, Points& grad) {
  for (Eigen::Index i = 0; i < dirs.rows(); ++i) {
    const double c = coefficient[static_cast<std::size_t>(i)];
    grad.row(i + 1) += c * dirs.row(i);
    grad.row(i) -= c * dirs.row(i);
  }
}

}  // namespace

double do_distance(const Points& g, const Points& u, int n_quad, Points* grad_u) {
  if (g.rows() < 2 || u.rows() < 2) throw std::invalid_argument("do_distance: paths need at least 2 points");
  if (n_quad < 1) throw std::invalid_argument("do_distance: n_quad must be positive");
  const geometry::ArcParam g_param(g);
  const std::vector<double> cu = cumulative_lengths(u);
  const double su = cu.back();
  if (!(su > 0) || !std::isfinite(su)) throw std::invalid_argument("do_distance: degenerate realization path");
  const Points dirs = segment_directions(u);
  const Eigen::Index last_segment = u.rows() - 2;

  const double inv_n = 1.0 / n_quad;
  double value = 0;
  // Coefficients of d(len_i) collected from all quadrature nodes.
  std::vector<double> len_coef;
  std::vector<double> prefix_drop;  // alpha_k added at j_k, swept to all i < j_k
  double total_scale = 0;
  if (grad_u) {
    grad_u->setZero(u.rows(), 2);
    len_coef.assign(static_cast<std::size_t>(u.rows() - 1), 0.0);
    prefix_drop.assign(static_cast<std::size_t>(u.rows() - 1), 0.0);
  }
  for (int k = 0; k < n_quad; ++k) {
    const double x = (k + 0.5) * inv_n;
    const double s = x * su;
    auto it = std::upper_bound(cu.begin(), cu.end(), s);
    Eigen::Index j = static_cast<Eigen::Index>(it - cu.begin()) - 1;
    j = std::clamp<Eigen::Index>(j, 0, last_segment);
    const double len = cu[static_cast<std::size_t>(j + 1)] - cu[static_cast<std::size_t>(j)];
    const double t = len > 0 ? (s - cu[static_cast<std::size_t>(j)]) / len : 0.0;
    const Vec2 fu = (1.0 - t) * u.row(j).transpose() + t * u.row(j + 1).transpose();
    const Vec2 r = g_param.at(x * g_param.length()) - fu;
    value += r.squaredNorm() * inv_n;
    if (grad_u) {
      // d value / d fu
      const Vec2 w = -2.0 * inv_n * r;
      grad_u->row(j) += (1.0 - t) * w.transpose();
      grad_u->row(j + 1) += t * w.transpose();
      // fu also moves along the segment when s, c_j or len_j change.
      const double alpha = w.dot(dirs.row(j).transpose());
      total_scale += alpha * x;
      prefix_drop[static_cast<std::size_t>(j)] += alpha;
      len_coef[static_cast<std::size_t>(j)] -= alpha * t;
    }
  }
  if (grad_u) {
    double running = 0;  // sum of alpha_k over nodes with j_k > i
    for (Eigen::Index i = last_segment; i >= 0; --i) {
      len_coef[static_cast<std::size_t>(i)] += total_scale - running;
      running += prefix_drop[static_cast<std::size_t>(i)];
    }
    scatter_length_gradient(len_coef, dirs, *grad_u);
  }
  return value;
}

double do_reg(const Points& theta, Points* grad) {
  if (theta.rows() < 3) throw std::invalid_argument("do_reg: need at least 3 points");
  const std::vector<double> c = cumulative_lengths(theta);
  const double length = c.back();
  if (!(length > 0)) throw std::invalid_argument("do_reg: zero-length path");
  double q = 0;
  Points q_grad = Points::Zero(theta.rows(), 2);
  for (Eigen::Index i = 1; i + 1 < theta.rows(); ++i) {
    const Eigen::RowVector2d h = 0.5 * (theta.row(i + 1) - 2.0 * theta.row(i) + theta.row(i - 1));
    q += h.squaredNorm();
    q_grad.row(i - 1) += h;
    q_grad.row(i) -= 2.0 * h;
    q_grad.row(i + 1) += h;
  }
  if (grad) {
    *grad = q_grad / length;
    const std::vector<double> coef(static_cast<std::size_t>(theta.rows() - 1), -q / (length * length));
    scatter_length_gradient(coef, segment_directions(theta), *grad);
  }
  return q / length;
}

double barrier(const Points& vertices, const Vec2& center, double radius, double margin, Points* grad) {
  if (vertices.rows() < 1) throw std::invalid_argument("barrier: no vertices");
  const double reach = radius + margin;
  const double inv_m = 1.0 / static_cast<double>(vertices.rows());
  double value = 0;
  if (grad) grad->setZero(vertices.rows(), 2);
  for (Eigen::Index i = 0; i < vertices.rows(); ++i) {
    const Vec2 d = vertices.row(i).transpose() - center;
    const double dist = d.norm();
    const double gap = reach - dist;
    if (gap <= 0) continue;
    value += gap * gap * inv_m;
    if (grad && dist > 0) grad->row(i) = (-2.0 * gap * inv_m / dist) * d.transpose();
  }
  return value;
}

double ratio_reg(const Eigen::VectorXd& theta, Eigen::VectorXd* grad) {
  const Eigen::Index n = theta.size();
  if (n < 6 || n % 2 != 0) throw std::invalid_argument("ratio_reg: need an even number of ratios, at least 6");
  const Eigen::Index half = n / 2;
  double sum = 0;
  if (grad) grad->setZero(n);
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    // Skip the top of the left side and the bottom of the right side.
    if (i == half - 1 || i == half) continue;
    const double h = 0.5 * (theta[i + 1] - 2.0 * theta[i] + theta[i - 1]);
    sum += h * h;
    if (grad) {
      (*grad)[i - 1] += 2.0 * h * 0.5;
      (*grad)[i] -= 2.0 * h;
      (*grad)[i + 1] += 2.0 * h * 0.5;
    }
  }
  const double norm = 1.0 / static_cast<double>(n - 4);
  if (grad) *grad *= norm;
  return sum * norm;
}

RobotCostResult robot_cost(const Eigen::VectorXd& theta, const RobotRealization& u, const RobotGoal& goal,
                           const RobotCostConfig& cfg) {
  cfg.validate();
  if (static_cast<Eigen::Index>(u.top_mid_index) >= u.vertices.rows()) {
    throw std::invalid_argument("robot_cost: top-midpoint index out of range");
  }
  RobotCostResult out;
  const Vec2 miss = u.top_mid() - goal.target;
  out.reach = 0.5 * miss.squaredNorm();
  Points barrier_grad;
  out.barrier = barrier(u.vertices, goal.obstacle_center, goal.obstacle_radius, cfg.margin, &barrier_grad);
  Eigen::VectorXd reg_grad;
  out.reg = ratio_reg(theta, &reg_grad);
  out.value = out.reach + cfg.lambda1 * out.barrier + cfg.lambda2 * out.reg;
  out.grad_vertices = cfg.lambda1 * barrier_grad;
  out.grad_vertices.row(static_cast<Eigen::Index>(u.top_mid_index)) += miss.transpose();
  out.grad_theta = cfg.lambda2 * reg_grad;
  return out;
}

}  // namespace amortize::losses
