#include "amortize/pipeline/generate.hpp"

#include "amortize/core/parallel.hpp"
#include "amortize/core/rng.hpp"
#include "amortize/geometry/arc.hpp"

#include <numbers>
#include <stdexcept>

namespace amortize::pipeline {

namespace {

Eigen::MatrixXd scalar(double v) { return Eigen::MatrixXd::Constant(1, 1, v); }

std::vector<Sample> ballistic_samples(int count, std::uint64_t seed, const sim::BallisticConfig& cfg) {
  std::vector<Sample> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    Rng rng(seed, static_cast<std::uint64_t>(i));
    const double theta = rng.uniform(0.0, 0.5 * std::numbers::pi);
    const double u = sim::ballistic_realize(theta, cfg);
    out[static_cast<std::size_t>(i)] = {scalar(theta), scalar(u), scalar(u)};
  }
  return out;
}

std::vector<Sample> fiber_samples(int count, std::uint64_t seed, const GenConfig& cfg) {
  const auto paths = sampling::generate_paths(count, cfg.sampler, seed);
  std::vector<Sample> out(paths.size());
  parallel_for(paths.size(), [&](std::size_t i) {
    const Points& raw = paths[i].points();
    // Equal chords at the nozzle spacing make the design a fixed point of the
    // simulator's own resampling, so the follower sees the design points.
    const Points design = geometry::chord_walk(raw, cfg.fiber.spacing);
    const Points fiber = sim::fiber_realize(design, cfg.fiber);
    if (fiber.rows() != design.rows()) throw std::logic_error("fiber sample: realization/design size mismatch");
    // The goal is the laid fiber without the repeats left where it stalled.
    out[i] = {design, fiber, geometry::take_rows(fiber, geometry::distinct_run_starts(fiber))};
  });
  return out;
}

std::vector<Sample> arm_samples(int count, std::uint64_t seed, const sim::ArmConfig& cfg) {
  std::vector<Sample> out(static_cast<std::size_t>(count));
  parallel_for(out.size(), [&](std::size_t i) {
    Rng rng(seed, i);
    Eigen::VectorXd ratios(kRobotDesignSize);
    for (int k = 0; k < kRobotDesignSize; ++k) ratios[k] = rng.uniform(kStretchMin, kStretchMax);
    const RobotRealization pose = sim::arm_realize(RobotDesign(ratios), cfg);
    const sim::Obstacle obstacle = sim::sample_obstacle(rng, &pose);
    const RobotGoal goal = sim::arm_goal_of(pose, obstacle.center, obstacle.radius);
    out[i] = {ratios, pose.vertices, goal.pack()};
  });
  return out;
}

}  // namespace

Dataset gen_dataset(TaskKind task, int count, std::uint64_t seed, const GenConfig& cfg) {
  if (count < 1) throw std::invalid_argument("dataset count must be at least 1");
  Dataset ds;
  ds.task = task;
  ds.seed = seed;
  switch (task) {
    case TaskKind::ballistic: ds.samples = ballistic_samples(count, seed, cfg.ballistic); break;
    case TaskKind::fiber: ds.samples = fiber_samples(count, seed, cfg); break;
    case TaskKind::arm: ds.samples = arm_samples(count, seed, cfg.arm); break;
  }
  return split_dataset(std::move(ds), cfg.split, seed);
}

}  // namespace amortize::pipeline
