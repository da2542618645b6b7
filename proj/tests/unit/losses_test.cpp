#include "amortize/geometry/metrics.hpp"
#include "amortize/losses/losses.hpp"
#include "amortize/optim/bfgs.hpp"
#include "amortize/sim/arm.hpp"

#include "checks.hpp"
#include "loss_oracles.hpp"
#include "paths.hpp"

#include <doctest.h>

using namespace amortize;
using namespace amortize::losses;
using amortize::testing::rel_error;

namespace {

Points pts(std::initializer_list<std::pair<double, double>> xy) {
  Points p(static_cast<Eigen::Index>(xy.size()), 2);
  Eigen::Index i = 0;
  for (auto [x, y] : xy) p.row(i++) << x, y;
  return p;
}

Eigen::VectorXd flat(const Points& p) { return Eigen::Map<const Eigen::VectorXd>(p.data(), p.size()); }
Points unflat(const Eigen::VectorXd& v) { return Eigen::Map<const Points>(v.data(), v.size() / 2, 2); }

Eigen::VectorXd random_ratios(Rng& rng) {
  Eigen::VectorXd r(40);
  for (int i = 0; i < 40; ++i) r[i] = rng.uniform(0.8, 1.2);
  return r;
}

}  // namespace

TEST_CASE("path cost examples and errors") {
  const auto line = testing::straight_line(6, 0.1);
  CHECK(path_cost(line, line, line, 0.5).value == doctest::Approx(0).scale(1));
  const auto r = path_cost(pts({{0, 0}}), pts({{1, 1}}), pts({{0, 0}}), 0.0);
  CHECK(r.value == 2);
  CHECK(r.grad_u.row(0) == Eigen::RowVector2d(2, 2));
  CHECK(r.grad_theta.isZero());
  CHECK_THROWS_AS(path_cost(line, line, testing::straight_line(5, 0.1), 0.1), std::invalid_argument);
}

TEST_CASE("property: path cost gradients") {
  Rng rng(1, 0);
  for (int t = 0; t < 50; ++t) {
    const int n = 3 + static_cast<int>(rng() % 15);
    const auto theta = testing::random_path(rng, n);
    const auto u = testing::random_path(rng, n);
    const auto g = testing::random_path(rng, n);
    const double lam = rng.uniform(0, 2);
    const auto r = path_cost(theta, u, g, lam);
    CHECK(r.value == doctest::Approx((g - u).squaredNorm() + lam * geometry::smooth_reg(theta)).epsilon(1e-12));
    const auto fd_t = optim::finite_diff_grad(
        [&](const Eigen::VectorXd& x) { return path_cost(unflat(x), u, g, lam).value; }, flat(theta));
    const auto fd_u = optim::finite_diff_grad(
        [&](const Eigen::VectorXd& x) { return path_cost(theta, unflat(x), g, lam).value; }, flat(u));
    CHECK(rel_error(flat(r.grad_theta), fd_t) < 1e-6);
    CHECK(rel_error(flat(r.grad_u), fd_u) < 1e-6);
  }
}

TEST_CASE("do distance examples") {
  CHECK(do_distance(pts({{0, 0}, {2, 0}}), pts({{0, 0}, {1, 0}}), 256) == doctest::Approx(1.0 / 3).epsilon(1e-4));
  // Same curve, different vertex placement.
  const auto g = pts({{0, 0}, {1, 0}, {1, 1}});
  const auto u = pts({{0, 0}, {0.25, 0}, {1, 0}, {1, 0.6}, {1, 1}});
  CHECK(do_distance(g, u) < 1e-9);
  Rng rng(2, 0);
  for (int t = 0; t < 20; ++t) {
    const auto a = testing::random_path(rng, 8);
    const auto b = testing::random_path(rng, 11);
    const Eigen::RowVector2d shift(rng.normal(), rng.normal());
    const double v = do_distance(a, b);
    CHECK(v == doctest::Approx(testing::do_distance_oracle(a, b, 256)).epsilon(1e-10));
    CHECK(do_distance(Points(a.rowwise() + shift), Points(b.rowwise() + shift)) == doctest::Approx(v).epsilon(1e-9));
  }
  CHECK_THROWS(do_distance(pts({{0, 0}}), pts({{0, 0}, {1, 0}})));
  CHECK_THROWS(do_distance(pts({{0, 0}, {0, 0}}), pts({{0, 0}, {1, 0}})));
}

TEST_CASE("property: do distance gradient") {
  Rng rng(3, 0);
  for (int t = 0; t < 50; ++t) {
    const auto g = testing::random_path(rng, 2 + static_cast<int>(rng() % 10));
    const auto u = testing::random_path(rng, 2 + static_cast<int>(rng() % 10));
    const int nq = 16 + static_cast<int>(rng() % 64);
    Points grad;
    const double v = do_distance(g, u, nq, &grad);
    CHECK(v == do_distance(g, u, nq));
    const auto fd = optim::finite_diff_grad([&](const Eigen::VectorXd& x) { return do_distance(g, unflat(x), nq); }, flat(u));
    CHECK(rel_error(flat(grad), fd) < 1e-6);
  }
}

TEST_CASE("do regulariser") {
  CHECK(do_reg(testing::straight_line(7, 0.2, {1, 3})) == doctest::Approx(0).scale(1));
  CHECK(do_reg(pts({{0, 0}, {1, 0}, {3, 0}})) == doctest::Approx(0.25 / 3));
  CHECK_THROWS(do_reg(pts({{0, 0}, {1, 0}})));
  CHECK_THROWS(do_reg(pts({{1, 1}, {1, 1}, {1, 1}})));
  Rng rng(4, 0);
  for (int t = 0; t < 50; ++t) {
    const auto p = testing::random_path(rng, 3 + static_cast<int>(rng() % 20));
    Points grad;
    const double v = do_reg(p, &grad);
    CHECK(v >= 0);
    const auto fd = optim::finite_diff_grad([](const Eigen::VectorXd& x) { return do_reg(unflat(x)); }, flat(p));
    CHECK(rel_error(flat(grad), fd) < 1e-6);
  }
}

TEST_CASE("barrier examples") {
  const Vec2 c(1, 2);
  CHECK(barrier(pts({{1, 3.5}, {3, 2}}), c, 0.9, 0.1) == 0);
  CHECK(barrier(pts({{1, 2.95}}), c, 0.9, 0.1) == doctest::Approx(0.0025).epsilon(1e-9));
  Points g;
  CHECK(barrier(pts({{1, 3}}), c, 0.9, 0.1, &g) == 0);
  CHECK(g.isZero());
  CHECK(barrier(pts({{1, 2}, {9, 9}}), c, 0.9, 0.1, &g) == doctest::Approx(0.5));
  CHECK(g.isZero());
}

TEST_CASE("property: barrier gradient and translation invariance") {
  Rng rng(5, 0);
  for (int t = 0; t < 50; ++t) {
    const Vec2 c(rng.normal(), rng.normal());
    const int m = 1 + static_cast<int>(rng() % 30);
    Points v(m, 2);
    for (int i = 0; i < m; ++i) {
      double d;
      do d = rng.uniform(0.05, 1.5);
      while (std::abs(d - 1.0) < 1e-6);
      const double a = rng.uniform(0, 6.283);
      v.row(i) << c.x() + d * std::cos(a), c.y() + d * std::sin(a);
    }
    Points grad;
    const double value = barrier(v, c, 0.9, 0.1, &grad);
    const auto fd = optim::finite_diff_grad([&](const Eigen::VectorXd& x) { return barrier(unflat(x), c, 0.9, 0.1); }, flat(v));
    CHECK(rel_error(flat(grad), fd) < 1e-6);
    const Eigen::RowVector2d s(rng.normal(), rng.normal());
    CHECK(barrier(Points(v.rowwise() + s), c + s.transpose(), 0.9, 0.1) == doctest::Approx(value).epsilon(1e-9));
  }
}

TEST_CASE("ratio regulariser") {
  CHECK(ratio_reg(Eigen::VectorXd::Ones(40)) == 0);
  Eigen::VectorXd ramp(40);
  for (int i = 0; i < 20; ++i) ramp[i] = 0.8 + 0.01 * i;
  for (int i = 20; i < 40; ++i) ramp[i] = 1.2 - 0.015 * (i - 20);
  CHECK(ratio_reg(ramp) == doctest::Approx(0).scale(1));
  Eigen::VectorXd kink = Eigen::VectorXd::Ones(40);
  kink[4] = 1.1;  // fifth entry
  CHECK(ratio_reg(kink) == doctest::Approx(0.015 / 36).epsilon(1e-12));
  // The seam between the sides is not penalised.
  Eigen::VectorXd step = Eigen::VectorXd::Ones(40);
  step.tail(20).setConstant(1.15);
  CHECK(ratio_reg(step) == 0);

  Rng rng(6, 0);
  for (int t = 0; t < 50; ++t) {
    const auto r = random_ratios(rng);
    Eigen::VectorXd grad;
    const double v = ratio_reg(r, &grad);
    CHECK(v == doctest::Approx(testing::ratio_reg_oracle(r)).epsilon(1e-12));
    const auto fd = optim::finite_diff_grad([](const Eigen::VectorXd& x) { return ratio_reg(x); }, r);
    CHECK(rel_error(grad, fd) < 1e-6);
  }
  CHECK_THROWS(ratio_reg(Eigen::VectorXd::Ones(5)));
}

TEST_CASE("robot cost") {
  const auto rest = sim::arm_realize(RobotDesign());
  RobotGoal goal;
  goal.target = rest.top_mid();
  goal.obstacle_center = {4.5, 4.5};
  const auto zero = robot_cost(Eigen::VectorXd::Ones(40), rest, goal);
  CHECK(zero.value == 0);
  CHECK(zero.grad_theta.isZero());
  CHECK(zero.grad_vertices.isZero());

  goal.target = {1, 9};
  goal.obstacle_center = {0.5, 5};
  const RobotCostConfig cfg{0.5, 0.07, 0.1};
  Eigen::VectorXd kink = Eigen::VectorXd::Ones(40);
  kink[4] = 1.1;
  const auto r = robot_cost(kink, rest, goal, cfg);
  CHECK(r.reach == doctest::Approx(0.5 * (1 + 1)));
  CHECK(r.barrier == doctest::Approx(barrier(rest.vertices, goal.obstacle_center, 0.9, 0.1)));
  CHECK(r.reg == doctest::Approx(0.015 / 36));
  CHECK(r.value == doctest::Approx(r.reach + 0.5 * r.barrier + 0.07 * r.reg));
  CHECK_THROWS(robot_cost(Eigen::VectorXd::Ones(39), rest, goal));
}

TEST_CASE("property: robot cost gradients") {
  Rng rng(7, 0);
  int checked = 0;
  while (checked < 30) {
    const Eigen::VectorXd theta = random_ratios(rng);
    const auto u = sim::arm_realize(RobotDesign(theta));
    RobotGoal goal;
    goal.target = Vec2(rng.uniform(-5, 5), rng.uniform(5, 12));
    // Put the obstacle next to a random vertex so the barrier is active.
    const auto pick = static_cast<Eigen::Index>(rng() % 63);
    goal.obstacle_center = u.vertices.row(pick).transpose() + Vec2(rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8));
    const auto dist = (u.vertices.rowwise() - goal.obstacle_center.transpose()).rowwise().norm();
    if ((dist.array() - 1.0).abs().minCoeff() < 1e-6) continue;
    const RobotCostConfig cfg{0.5, rng.uniform(0.03, 0.09), 0.1};
    const auto r = robot_cost(theta, u, goal, cfg);
    const auto fd_t = optim::finite_diff_grad([&](const Eigen::VectorXd& x) { return robot_cost(x, u, goal, cfg).value; }, theta);
    RobotRealization probe = u;
    const auto fd_v = optim::finite_diff_grad(
        [&](const Eigen::VectorXd& x) {
          probe.vertices = unflat(x);
          return robot_cost(theta, probe, goal, cfg).value;
        },
        flat(u.vertices));
    // Normwise over the whole gradient: the theta block alone is ~1e-4 while
    // f is ~10, so on its own it sits at the rounding floor of the differences.
    Eigen::VectorXd analytic(40 + 126), numeric(40 + 126);
    analytic << r.grad_theta, flat(r.grad_vertices);
    numeric << fd_t, fd_v;
    CHECK(rel_error(analytic, numeric) < 1e-6);
    ++checked;
  }
}
