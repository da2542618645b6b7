#pragma once

#include "amortize/core/types.hpp"

#include <vector>

namespace amortize::sim {

/// Lag-follower deposition model: the laid fiber trails the nozzle by at most
/// `lag`, which rounds corners and collapses small nozzle wiggles.
struct FiberConfig {
  double lag = 0.15;
  double spacing = 0.03;  // nozzle path is resampled to this arc-length step

  void validate() const;
};

/// Resamples the extruder path to uniform spacing, then runs the follower:
/// u_0 = e_0; u_i = e_i + (u_{i-1} - e_i) L / |u_{i-1} - e_i| when that
/// distance exceeds L, else u_i = u_{i-1}. The result may contain repeated
/// points while the nozzle moves within L of the fiber end.
Points fiber_realize(const Points& extruder, const FiberConfig& cfg = {});

/// The follower recurrence alone, on the given nozzle samples.
Points lag_follow(const Points& nozzle, double lag);

struct AmplitudePair {
  double extruder_amplitude = 0;
  double realized_amplitude = 0;
};

/// One sine period y = A sin(2 pi x / wavelength) per amplitude, realised;
/// realised amplitude is the peak |y| of the fiber.
std::vector<AmplitudePair> amplitude_response(const std::vector<double>& amplitudes, const FiberConfig& cfg = {},
                                              double wavelength = 10.0);

/// Total absolute turning angle of a polyline, skipping zero-length segments.
double total_turning(const Points& path);

}  // namespace amortize::sim
