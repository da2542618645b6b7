#include "amortize/sim/ballistic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace amortize::sim {

void BallisticConfig::validate() const {
  if (!(speed > 0) || !(gravity > 0)) throw std::invalid_argument("ballistic speed and gravity must be positive");
}

double ballistic_realize(double theta, const BallisticConfig& cfg) {
  cfg.validate();
  if (!(theta >= 0.0 && theta <= 0.5 * std::numbers::pi)) {
    throw std::invalid_argument("launch angle " + std::to_string(theta) + " outside [0, pi/2]");
  }
  return cfg.speed * cfg.speed * std::sin(2.0 * theta) / cfg.gravity;
}

}  // namespace amortize::sim
