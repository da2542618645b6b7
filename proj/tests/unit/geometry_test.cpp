#include "amortize/geometry/arc.hpp"
#include "amortize/geometry/metrics.hpp"
#include "amortize/optim/bfgs.hpp"

#include "checks.hpp"
#include "paths.hpp"

#include <doctest.h>

using namespace amortize;
using namespace amortize::geometry;

namespace {

Points pts(std::initializer_list<std::pair<double, double>> xy) {
  Points p(static_cast<Eigen::Index>(xy.size()), 2);
  Eigen::Index i = 0;
  for (auto [x, y] : xy) p.row(i++) << x, y;
  return p;
}

// Brute-force Chamfer straight from the definition.
double chamfer_oracle(const Points& g, const Points& u) {
  auto directed = [](const Points& a, const Points& b) {
    double total = 0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      double best = INFINITY;
      for (Eigen::Index j = 0; j < b.rows(); ++j) best = std::min(best, (a.row(i) - b.row(j)).norm());
      total += best;
    }
    return total / static_cast<double>(a.rows());
  };
  return 0.5 * (directed(g, u) + directed(u, g));
}

// Sum over interior points of ||(t_i - t_{i-1}) / mean segment length||^2.
double smooth_oracle(const Points& p) {
  double total = 0;
  for (Eigen::Index i = 1; i + 1 < p.rows(); ++i) {
    const Eigen::RowVector2d a = p.row(i) - p.row(i - 1);
    const Eigen::RowVector2d b = p.row(i + 1) - p.row(i);
    const double h = 0.5 * (a.norm() + b.norm());
    total += ((b.normalized() - a.normalized()) / h).squaredNorm();
  }
  return total;
}

Eigen::VectorXd flat(const Points& p) { return Eigen::Map<const Eigen::VectorXd>(p.data(), p.size()); }
Points unflat(const Eigen::VectorXd& v) { return Eigen::Map<const Points>(v.data(), v.size() / 2, 2); }

}  // namespace

TEST_CASE("arc parameterisation reproduces points and clamps") {
  const auto p = pts({{0, 0}, {3, 4}, {3, 5}});
  const ArcParam a(p);
  CHECK(a.length() == 6);
  CHECK(a.at(0) == Vec2(0, 0));
  CHECK(a.at(5) == Vec2(3, 4));
  CHECK(a.at(6) == Vec2(3, 5));
  CHECK(a.at(-1) == Vec2(0, 0));
  CHECK(a.at(100) == Vec2(3, 5));
  CHECK(a.at(2.5).isApprox(Vec2(1.5, 2)));
  CHECK(path_length(p) == 6);
}

TEST_CASE("resample examples") {
  const auto seg = resample(pts({{0, 0}, {1, 0}}), 5);
  CHECK(seg.col(0).isApprox(Eigen::VectorXd::LinSpaced(5, 0, 1)));
  CHECK(seg.col(1).isZero());

  const auto l = resample(pts({{0, 0}, {1, 0}, {1, 1}}), 3);
  CHECK(l.row(1).isApprox(Eigen::RowVector2d(1, 0)));
  CHECK(l.row(2) == Eigen::RowVector2d(1, 1));

  const auto line = testing::straight_line(7, 0.3, {1, 2});
  CHECK((resample(line, 7) - line).cwiseAbs().maxCoeff() < 1e-12);

  CHECK_THROWS_AS(resample(pts({{1, 1}, {1, 1}}), 4), std::invalid_argument);
  CHECK_THROWS_AS(resample(line, 1), std::invalid_argument);
  const Path2D as_path(line);
  CHECK(resample(as_path, 4).size() == 4);
}

TEST_CASE("property: resample keeps endpoints, spacing and length bounds") {
  Rng rng(12, 0);
  for (int t = 0; t < 100; ++t) {
    const auto p = testing::random_path(rng, 3 + static_cast<int>(rng() % 30));
    const int n_out = 2 + static_cast<int>(rng() % 200);
    const auto r = resample(p, n_out);
    CHECK(r.row(0) == p.row(0));
    CHECK(r.row(n_out - 1) == p.row(p.rows() - 1));
    const double s = path_length(p);
    const double sr = path_length(r);
    CHECK(sr <= s * (1 + 1e-12));
    CHECK(sr >= s - 2 * s / (n_out - 1) - 1e-12);
    // Resampled points sit at uniform arc-length spacing along the source.
    const ArcParam src(p);
    for (int k = 0; k < n_out; ++k) CHECK((r.row(k).transpose() - src.at(s * k / (n_out - 1))).norm() < 1e-9 * (1 + s));
  }
}

TEST_CASE("count for spacing") {
  CHECK(count_for_spacing(3.0, 0.03) == 101);
  CHECK(count_for_spacing(0.001, 0.03) == 2);
  CHECK_THROWS(count_for_spacing(1.0, 0.0));
}

TEST_CASE("window features") {
  const auto line = testing::straight_line(11, 0.1);
  const ArcParam a(line);
  const auto f = window_features(a, 0.5, 30, 0.03);
  REQUIRE(f.size() == 122);
  for (int i = -30; i <= 30; ++i) {
    const double expect = std::clamp(0.5 + i * 0.03, 0.0, 1.0) - 0.5;
    CHECK(f[2 * (i + 30)] == doctest::Approx(expect).epsilon(1e-12));
    CHECK(f[2 * (i + 30) + 1] == 0);
  }
  CHECK(f[60] == 0);
  CHECK(f[61] == 0);
}

TEST_CASE("property: window features are translation invariant with a zero centre") {
  Rng rng(44, 0);
  for (int t = 0; t < 50; ++t) {
    Points p = testing::random_path(rng, 20);
    const ArcParam a(p);
    const double c = rng.uniform(-0.5, a.length() + 0.5);
    const auto f = window_features(a, c, 5, 0.07);
    CHECK(f[10] == 0);
    CHECK(f[11] == 0);
    p.rowwise() += Eigen::RowVector2d(rng.normal() * 5, rng.normal() * 5);
    CHECK((window_features(ArcParam(p), c, 5, 0.07) - f).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("index windows match arc windows on uniformly spaced paths") {
  // Equal segment lengths put every window sample exactly on a vertex.
  Rng rng(3, 0);
  const double spacing = 0.03;
  Points p(40, 2);
  p.row(0) << 0.5, -0.2;
  double heading = 0;
  for (int i = 1; i < 40; ++i) {
    heading += rng.uniform(-0.8, 0.8);
    p.row(i) = p.row(i - 1) + spacing * Eigen::RowVector2d(std::cos(heading), std::sin(heading));
  }
  const auto arc = arc_windows(ArcParam(p), 6, spacing);
  const auto idx = index_windows(p, 6);
  REQUIRE(arc.cols() == p.rows());
  CHECK((arc - idx).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("index window adjoint") {
  Rng rng(5, 0);
  for (int t = 0; t < 20; ++t) {
    const int n = 2 + static_cast<int>(rng() % 20);
    const int m = 1 + static_cast<int>(rng() % 8);
    const Points x = testing::random_path(rng, n);
    const Eigen::MatrixXd y = Eigen::MatrixXd::Random(2 * (2 * m + 1), n);
    const double lhs = (index_windows(x, m).array() * y.array()).sum();
    const double rhs = (x.array() * index_windows_adjoint(y, m).array()).sum();
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("chamfer examples") {
  Rng rng(1, 0);
  const auto p = testing::random_path(rng, 30);
  CHECK(chamfer(p, p) == 0);
  CHECK(chamfer(pts({{0, 0}}), pts({{3, 4}})) == 5);
  const auto a = testing::straight_line(10, 0.2);
  const auto b = testing::straight_line(10, 0.2, {1, 0}, {0, 0.37});
  CHECK(chamfer(a, b) == doctest::Approx(0.37).epsilon(1e-12));
}

TEST_CASE("property: chamfer is symmetric, non-negative and matches brute force") {
  Rng rng(9, 0);
  for (int t = 0; t < 100; ++t) {
    const auto g = testing::random_path(rng, 1 + static_cast<int>(rng() % 40));
    const auto u = testing::random_path(rng, 1 + static_cast<int>(rng() % 40));
    const double c = chamfer(g, u);
    CHECK(c >= 0);
    CHECK(c == doctest::Approx(chamfer(u, g)).epsilon(1e-14));
    CHECK(c == doctest::Approx(chamfer_oracle(g, u)).epsilon(1e-12));
  }
}

TEST_CASE("smooth regulariser examples") {
  CHECK(smooth_reg(testing::straight_line(9, 0.4, {1, 1})) == doctest::Approx(0).scale(1));
  CHECK(smooth_reg(pts({{0, 0}, {1, 0}, {1, 1}})) == doctest::Approx(2));
  CHECK_THROWS_AS(smooth_reg(pts({{0, 0}, {1, 0}})), std::invalid_argument);
  CHECK_THROWS_AS(smooth_reg(pts({{0, 0}, {1, 0}, {1, 0}, {2, 0}})), std::invalid_argument);
  CHECK_THROWS_AS(smooth_reg_grad(pts({{0, 0}, {0, 0}, {2, 0}})), std::invalid_argument);
}

TEST_CASE("property: smooth regulariser matches oracle, scales as 1/c^2") {
  Rng rng(21, 0);
  for (int t = 0; t < 100; ++t) {
    const auto p = testing::random_path(rng, 3 + static_cast<int>(rng() % 30));
    const double r = smooth_reg(p);
    CHECK(r >= 0);
    CHECK(r == doctest::Approx(smooth_oracle(p)).epsilon(1e-10));
    const double c = rng.uniform(0.2, 5.0);
    CHECK(smooth_reg(Points(p * c)) == doctest::Approx(r / (c * c)).epsilon(1e-10));
  }
}

TEST_CASE("property: smooth regulariser gradient") {
  Rng rng(22, 0);
  for (int t = 0; t < 100; ++t) {
    const auto p = testing::random_path(rng, 3 + static_cast<int>(rng() % 12));
    Points g;
    const double v = smooth_reg(p, &g);
    CHECK(v == smooth_reg(p));
    CHECK(g == smooth_reg_grad(p));
    const auto fd = optim::finite_diff_grad([](const Eigen::VectorXd& x) { return smooth_reg(unflat(x)); }, flat(p));
    CHECK(testing::rel_error(flat(g), fd) < 1e-6);

    Points moved = p;
    moved.rowwise() += Eigen::RowVector2d(3, -7);
    CHECK((smooth_reg_grad(moved) - g).cwiseAbs().maxCoeff() < 1e-8 * (1 + g.cwiseAbs().maxCoeff()));
  }
  CHECK(smooth_reg_grad(testing::straight_line(8, 0.3)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("distinct run starts") {
  const auto p = pts({{0, 0}, {0, 0}, {0, 0}, {1, 0}, {2, 0}, {2, 0}, {3, 0}});
  const auto rows = distinct_run_starts(p);
  CHECK(rows == std::vector<Eigen::Index>{0, 3, 4, 6});
  const auto kept = take_rows(p, rows);
  CHECK(kept.rows() == 4);
  CHECK(kept.row(3) == Eigen::RowVector2d(3, 0));
  CHECK(distinct_run_starts(pts({{1, 1}})) == std::vector<Eigen::Index>{0});
  // Runs are measured against the last kept point, so slow creep collapses too.
  const auto creep = pts({{0, 0}, {0.4, 0}, {0.8, 0}, {1.2, 0}});
  CHECK(distinct_run_starts(creep, 1.0) == std::vector<Eigen::Index>{0, 3});
}

TEST_CASE("chord walk") {
  const auto seg = chord_walk(pts({{0, 0}, {2, 0}}), 0.5);
  CHECK(seg.rows() == 5);
  CHECK(seg.col(0).isApprox(Eigen::VectorXd::LinSpaced(5, 0, 2)));
  // The tail shorter than one chord is dropped.
  CHECK(chord_walk(pts({{0, 0}, {1.2, 0}}), 0.5).rows() == 3);

  Rng rng(30, 0);
  for (int t = 0; t < 50; ++t) {
    const auto p = testing::random_path(rng, 5 + static_cast<int>(rng() % 30), 0.3);
    const auto r = chord_walk(p, 0.03);
    const Eigen::Index n = r.rows();
    REQUIRE(n >= 2);
    CHECK(r.row(0) == p.row(0));
    const Eigen::VectorXd chords = (r.bottomRows(n - 1) - r.topRows(n - 1)).rowwise().norm();
    CHECK((chords.array() - 0.03).abs().maxCoeff() < 1e-12);
    CHECK((r.row(n - 1) - p.row(p.rows() - 1)).norm() <= 0.03 + 1e-12);
    // Every output point lies on the source polyline.
    for (Eigen::Index k = 0; k < n; ++k) {
      double best = INFINITY;
      for (Eigen::Index j = 0; j + 1 < p.rows(); ++j) {
        const Eigen::RowVector2d a = p.row(j), d = p.row(j + 1) - p.row(j);
        const double s = std::clamp((r.row(k) - a).dot(d) / d.squaredNorm(), 0.0, 1.0);
        best = std::min(best, (r.row(k) - (a + s * d)).norm());
      }
      CHECK(best < 1e-9);
    }
    // Fixed point of arc-length resampling at the chord spacing.
    CHECK(count_for_spacing(path_length(r), 0.03) == n);
    CHECK((resample(r, static_cast<int>(n)) - r).cwiseAbs().maxCoeff() < 1e-9);
  }
  CHECK_THROWS_AS(chord_walk(pts({{0, 0}, {0.1, 0}}), 0.5), std::invalid_argument);
  CHECK_THROWS_AS(chord_walk(pts({{0, 0}, {1, 0}}), 0), std::invalid_argument);
  CHECK_THROWS_AS(chord_walk(pts({{0, 0}}), 0.1), std::invalid_argument);
}

TEST_CASE("chord walk jumps across a hairpin narrower than the chord") {
  const auto hairpin = pts({{0, 0}, {1, 0}, {1, 0.05}, {0, 0.05}});
  const auto r = chord_walk(hairpin, 0.15);
  const Eigen::Index n = r.rows();
  const Eigen::VectorXd chords = (r.bottomRows(n - 1) - r.topRows(n - 1)).rowwise().norm();
  CHECK((chords.array() - 0.15).abs().maxCoeff() < 1e-12);
  CHECK(r(n - 1, 1) == doctest::Approx(0.05));
  CHECK(r.col(0).maxCoeff() < 1.0);  // the turn itself is cut
}
