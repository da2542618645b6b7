#include "amortize/sim/fiber.hpp"

#include "amortize/geometry/arc.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace amortize::sim {

void FiberConfig::validate() const {
  if (!(lag >= 0)) throw std::invalid_argument("fiber lag must be non-negative");
  if (!(spacing > 0)) throw std::invalid_argument("fiber spacing must be positive");
}

Points lag_follow(const Points& nozzle, double lag) {
  if (!(lag >= 0)) throw std::invalid_argument("fiber lag must be non-negative");
  Points u(nozzle.rows(), 2);
  if (nozzle.rows() == 0) return u;
  u.row(0) = nozzle.row(0);
  for (Eigen::Index i = 1; i < nozzle.rows(); ++i) {
    const Vec2 e = nozzle.row(i).transpose();
    const Vec2 prev = u.row(i - 1).transpose();
    const Vec2 offset = prev - e;
    const double d = offset.norm();
    if (d > lag) {
      u.row(i) = (e + offset * (lag / d)).transpose();
    } else {
      u.row(i) = prev.transpose();
    }
  }
  return u;
}

Points fiber_realize(const Points& extruder, const FiberConfig& cfg) {
  cfg.validate();
  if (extruder.rows() < 2) throw std::invalid_argument("fiber_realize needs at least 2 points");
  const double length = geometry::path_length(extruder);
  if (!(length > 0) || !std::isfinite(length)) throw std::invalid_argument("fiber_realize: degenerate extruder path");
  const Points nozzle = geometry::resample(extruder, geometry::count_for_spacing(length, cfg.spacing));
  return lag_follow(nozzle, cfg.lag);
}

std::vector<AmplitudePair> amplitude_response(const std::vector<double>& amplitudes, const FiberConfig& cfg,
                                              double wavelength) {
  constexpr int kSamples = 4001;
  std::vector<AmplitudePair> out;
  out.reserve(amplitudes.size());
  for (double a : amplitudes) {
    if (!(a > 0)) throw std::invalid_argument("amplitudes must be positive");
    Points sine(kSamples, 2);
    for (int i = 0; i < kSamples; ++i) {
      const double x = wavelength * i / (kSamples - 1);
      sine(i, 0) = x;
      sine(i, 1) = a * std::sin(2.0 * std::numbers::pi * x / wavelength);
    }
    const Points fiber = fiber_realize(sine, cfg);
    out.push_back({a, fiber.col(1).cwiseAbs().maxCoeff()});
  }
  return out;
}

double total_turning(const Points& path) {
  double total = 0;
  Vec2 prev_dir = Vec2::Zero();
  bool have_prev = false;
  for (Eigen::Index i = 1; i < path.rows(); ++i) {
    const Vec2 d = (path.row(i) - path.row(i - 1)).transpose();
    if (d.norm() <= kMinPointSpacing) continue;
    if (have_prev) total += std::abs(std::atan2(prev_dir.x() * d.y() - prev_dir.y() * d.x(), prev_dir.dot(d)));
    prev_dir = d;
    have_prev = true;
  }
  return total;
}

}  // namespace amortize::sim
