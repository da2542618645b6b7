#pragma once

namespace amortize::sim {

struct BallisticConfig {
  double speed = 10.0;
  double gravity = 9.8;

  double max_range() const { return speed * speed / gravity; }
  void validate() const;
};

/// Landing distance v^2 sin(2 theta) / g for a launch angle in [0, pi/2].
double ballistic_realize(double theta, const BallisticConfig& cfg = {});

}  // namespace amortize::sim
