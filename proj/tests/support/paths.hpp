#pragma once

#include "amortize/core/rng.hpp"
#include "amortize/core/types.hpp"

#include <cmath>

namespace amortize::testing {

/// Random walk with turning noise; neighbours at least 0.05 apart.
inline Points random_path(Rng& rng, int n, double step = 0.2) {
  Points p(n, 2);
  p.row(0) << rng.normal(), rng.normal();
  double heading = rng.uniform(0, 2 * M_PI);
  for (int i = 1; i < n; ++i) {
    heading += rng.uniform(-1.0, 1.0);
    const double len = step * rng.uniform(0.25, 1.5);
    p(i, 0) = p(i - 1, 0) + len * std::cos(heading);
    p(i, 1) = p(i - 1, 1) + len * std::sin(heading);
  }
  return p;
}

inline Points straight_line(int n, double spacing, Vec2 dir = {1, 0}, Vec2 origin = {0, 0}) {
  Points p(n, 2);
  for (int i = 0; i < n; ++i) p.row(i) = (origin + i * spacing * dir.normalized()).transpose();
  return p;
}

}  // namespace amortize::testing
