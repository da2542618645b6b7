#include "amortize/sampling/ess.hpp"
#include "amortize/sampling/gp.hpp"
#include "amortize/sampling/intersect.hpp"
#include "amortize/sampling/paths.hpp"

#include "paths.hpp"

#include <doctest.h>

#include <cstdlib>
#include <numbers>

using namespace amortize;
using namespace amortize::sampling;

namespace {

constexpr double kPi = std::numbers::pi;

Points pts(std::initializer_list<std::pair<double, double>> xy) {
  Points p(static_cast<Eigen::Index>(xy.size()), 2);
  Eigen::Index i = 0;
  for (auto [x, y] : xy) p.row(i++) << x, y;
  return p;
}

// O(n^2) reference using a plain orientation test with no tolerance.
bool crosses_oracle(const Points& p) {
  auto orient = [](Vec2 a, Vec2 b, Vec2 c) {
    const double v = (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
    return (v > 0) - (v < 0);
  };
  for (Eigen::Index i = 0; i + 1 < p.rows(); ++i) {
    for (Eigen::Index j = i + 2; j + 1 < p.rows(); ++j) {
      const Vec2 a = p.row(i), b = p.row(i + 1), c = p.row(j), d = p.row(j + 1);
      if (orient(a, b, c) * orient(a, b, d) < 0 && orient(c, d, a) * orient(c, d, b) < 0) return true;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("periodic kernel") {
  CHECK(periodic_kernel(0.7, 0.7, 0.1) == 1);
  CHECK(periodic_kernel(0.3, 0.3 + 2 * kPi, 0.1) == doctest::Approx(1).epsilon(1e-12));
  CHECK(periodic_kernel(0, kPi / 2, 0.1) == doctest::Approx(std::exp(-25.0)).epsilon(1e-9));
  CHECK(periodic_kernel(1, 2, 0.5) == periodic_kernel(2, 1, 0.5));
  CHECK(periodic_kernel(0, kPi, 0.1) > 0);
}

TEST_CASE("gp prior structure") {
  const GpPrior prior(200, 0.1);
  CHECK(prior.size() == 200);
  CHECK(prior.gram().isApprox(prior.gram().transpose()));
  CHECK(prior.gram().diagonal().isOnes());
  CHECK(prior.jitter() <= 1e-6);
  CHECK(prior.grid()[1] == doctest::Approx(2 * kPi / 200));
  const Eigen::MatrixXd l = prior.cholesky();
  const Eigen::MatrixXd jittered = prior.gram() + prior.jitter() * Eigen::MatrixXd::Identity(200, 200);
  CHECK((l * l.transpose() - jittered).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(prior.transform(Eigen::VectorXd::Zero(200)).isZero());
  Rng rng(1, 0);
  CHECK(gp_prior_sample(prior, rng).size() == 200);
  CHECK_THROWS(GpPrior(10, -1.0));
}

TEST_CASE("gp prior sample covariance matches the kernel") {
  const GpPrior prior(50, 0.3);
  Rng rng(2, 0);
  const int n = 2000;
  const int i = 3, j = 5;
  double sii = 0, sij = 0, sjj = 0;
  for (int k = 0; k < n; ++k) {
    const auto s = gp_prior_sample(prior, rng);
    sii += s[i] * s[i];
    sij += s[i] * s[j];
    sjj += s[j] * s[j];
  }
  CHECK(std::abs(sii / n - 1.0) < 0.1);
  CHECK(std::abs(sjj / n - 1.0) < 0.1);
  CHECK(std::abs(sij / n - periodic_kernel(prior.grid()[i], prior.grid()[j], 0.3)) < 0.1);
}

TEST_CASE("self intersection examples") {
  CHECK(self_intersects(pts({{0, 0}, {1, 1}, {1, 0}, {0, 1}})));
  CHECK_FALSE(self_intersects(pts({{0, 0}, {1, 0}, {2, 0}})));
  Points gon(100, 2);
  for (int i = 0; i < 100; ++i) gon.row(i) << std::cos(2 * kPi * i / 100), std::sin(2 * kPi * i / 100);
  CHECK_FALSE(self_intersects(gon));
  // Touching counts: the fourth vertex lands on the first segment.
  CHECK(self_intersects(pts({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 0}})));
  // Closing the loop onto the start point touches segment 0.
  CHECK(self_intersects(pts({{0, 0}, {1, 0}, {1, 1}, {0, 0}})));
  // Folding back along itself overlaps collinearly.
  CHECK(self_intersects(pts({{0, 0}, {2, 0}, {2, 1}, {1, 0}, {3, 0}})));
  CHECK(segments_intersect({0, 0}, {1, 0}, {1, 0}, {2, 5}));
  CHECK_FALSE(segments_intersect({0, 0}, {1, 0}, {0, 1}, {1, 1}));
}

TEST_CASE("property: self intersection agrees with a reference on generic polylines") {
  Rng rng(6, 0);
  for (int t = 0; t < 300; ++t) {
    const auto p = testing::random_path(rng, 4 + static_cast<int>(rng() % 12), 0.8);
    CHECK(self_intersects(p) == crosses_oracle(p));
  }
}

TEST_CASE("ess with an always-true likelihood takes the first proposal") {
  Rng rng(4, 0);
  const Eigen::Vector3d x(1, 2, 3), nu(-0.5, 0.1, 2);
  Rng replay = rng;
  replay.uniform01();
  const double a0 = replay.uniform(0.0, 2 * kPi);
  const auto out = ess_transition(x, nu, [](const Eigen::VectorXd&) { return 0.0; }, rng);
  CHECK(out.proposals == 1);
  CHECK(out.state.isApprox(x * std::cos(a0) + nu * std::sin(a0)));
}

TEST_CASE("ess shrinks onto a tiny feasible ball") {
  Rng rng(8, 0);
  const Eigen::Vector2d x(0.3, -0.4);
  const double eps = 1e-6;
  const LogLikelihood ball = [&](const Eigen::VectorXd& y) {
    return (y - x).norm() < eps ? 0.0 : -std::numeric_limits<double>::infinity();
  };
  for (int t = 0; t < 20; ++t) {
    const Eigen::Vector2d nu(rng.normal(), rng.normal());
    CHECK((ess_step(x, nu, ball, rng) - x).norm() < eps);
  }
  CHECK_THROWS_AS(ess_step(Eigen::Vector2d(5, 5), Eigen::Vector2d(1, 1), ball, rng), std::invalid_argument);
  CHECK_THROWS_AS(ess_step(x, Eigen::Vector3d(1, 1, 1), ball, rng), std::invalid_argument);
}

TEST_CASE("ess chain preserves a standard normal prior") {
  Rng rng(13, 0);
  Eigen::VectorXd x = Eigen::Vector2d(0, 0);
  Eigen::Vector2d sum = Eigen::Vector2d::Zero(), sq = Eigen::Vector2d::Zero();
  const int n = 10000;
  for (int k = 0; k < n; ++k) {
    const Eigen::Vector2d nu(rng.normal(), rng.normal());
    x = ess_step(x, nu, [](const Eigen::VectorXd&) { return 0.0; }, rng);
    sum += x;
    sq += x.cwiseProduct(x);
  }
  const Eigen::Vector2d mean = sum / n;
  const Eigen::Vector2d var = sq / n - mean.cwiseProduct(mean);
  CHECK(mean.cwiseAbs().maxCoeff() < 0.05);
  CHECK((var.array() - 1).abs().maxCoeff() < 0.1);
}

TEST_CASE("generate paths") {
  SUBCASE("zero iterations returns the unit circle") {
    const auto paths = generate_paths(3, {50, 0, 0.1}, 1);
    REQUIRE(paths.size() == 3);
    for (const auto& p : paths) {
      CHECK(p.points() == unit_circle(50));
      CHECK_FALSE(self_intersects(p));
    }
  }
  SUBCASE("paths move away from the circle and never cross themselves") {
    const PathSamplerConfig cfg{200, 200, 0.1};
    const auto paths = generate_paths(100, cfg, 7);
    const Points circle = unit_circle(200);
    double displacement = 0;
    for (const auto& p : paths) {
      CHECK_FALSE(self_intersects(p));
      displacement += (p.points() - circle).rowwise().norm().mean();
    }
    CHECK(displacement / 100 > 0.1);
  }
  SUBCASE("deterministic and independent of thread count") {
    const PathSamplerConfig cfg{60, 20, 0.1};
    setenv("AMORTIZE_THREADS", "1", 1);
    const auto a = generate_paths(6, cfg, 5);
    setenv("AMORTIZE_THREADS", "3", 1);
    const auto b = generate_paths(6, cfg, 5);
    unsetenv("AMORTIZE_THREADS");
    const auto c = generate_paths(6, cfg, 6);
    for (int k = 0; k < 6; ++k) CHECK(a[k].points() == b[k].points());
    CHECK(a[0].points() != c[0].points());
  }
  CHECK_THROWS_AS(generate_paths(0, {}, 1), std::invalid_argument);
  CHECK_THROWS_AS(generate_paths(1, {3, 1, 0.1}, 1), std::invalid_argument);
}
