#pragma once

#include "amortize/core/types.hpp"

#include <cstdint>
#include <vector>

namespace amortize::sampling {

struct PathSamplerConfig {
  int n_points = 200;        // 1000 reproduces the original setup
  int iters_per_path = 200;  // 1000 reproduces the original setup
  double length_scale = 0.1;
};

/// Random smooth non-self-intersecting open paths.
///
/// Each path starts on the unit circle (the GP mean) and takes
/// `iters_per_path` joint ESS steps on the x/y deviations, with one shared
/// bracket so the non-intersection likelihood sees a whole path. Path k uses
/// RNG stream (seed, k); output is independent of thread count.
std::vector<Path2D> generate_paths(int count, const PathSamplerConfig& config, std::uint64_t seed);

/// Unit-circle starting polyline t_i = 2 pi i / n.
Points unit_circle(int n_points);

}  // namespace amortize::sampling
