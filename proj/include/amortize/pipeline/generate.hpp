#pragma once

#include "amortize/core/dataset.hpp"
#include "amortize/sampling/paths.hpp"
#include "amortize/sim/arm.hpp"
#include "amortize/sim/ballistic.hpp"
#include "amortize/sim/fiber.hpp"

#include <cstdint>

namespace amortize::pipeline {

struct GenConfig {
  sampling::PathSamplerConfig sampler;
  sim::FiberConfig fiber;
  sim::ArmConfig arm;
  sim::BallisticConfig ballistic;
  SplitFractions split;
};

/// Samples designs, realises them and derives goals.
///
/// ballistic: theta ~ U[0, pi/2], goal = landing distance.
/// fiber: sampled path resampled to the fiber spacing, realised by the lag
///   follower; goal = realised fiber with stalled repeats dropped.
/// arm: ratios i.i.d. U[0.8, 1.2]; goal = (top midpoint, obstacle centre,
///   radius) with the obstacle drawn clear of that sample's pose.
/// Sample i draws from RNG stream (seed, i), so output is thread-count
/// independent.
Dataset gen_dataset(TaskKind task, int count, std::uint64_t seed, const GenConfig& cfg = {});

}  // namespace amortize::pipeline
