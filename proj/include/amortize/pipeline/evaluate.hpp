#pragma once

#include "amortize/core/dataset.hpp"
#include "amortize/pipeline/solve.hpp"
#include "amortize/sim/arm.hpp"
#include "amortize/sim/ballistic.hpp"
#include "amortize/sim/fiber.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace amortize::pipeline {

/// One evaluated goal. `metric` is the task error: Chamfer distance (fiber),
/// top-midpoint distance (arm) or absolute landing error (ballistic).
struct GoalRecord {
  std::string method;
  std::size_t index = 0;  // sample index in the dataset
  double metric = 0;
  bool success = true;    // arm: every vertex strictly outside the obstacle
  double seconds = 0;     // design time for this goal
  std::string error;      // non-empty when the method or simulator failed
};

struct EvalSummary {
  std::size_t goals = 0;
  std::size_t failures = 0;   // goals whose evaluation raised an error
  std::size_t successes = 0;  // arm obstacle-avoidance count; else goals - failures
  double mean_metric = 0;     // over successful goals; NaN if none
};

struct EvalReport {
  std::string task;
  std::string method;
  int run = 0;  // repeated-run id, e.g. the model seed
  std::vector<GoalRecord> records;
  EvalSummary summary() const;
  static void write_csv_header(std::ostream& out);
  void write_csv_rows(std::ostream& out) const;
  void write_csv(std::ostream& out) const;
  nlohmann::json summary_json() const;
};

/// Mean and standard error of per-run values (sample std / sqrt(k)).
struct Aggregate {
  double mean = 0;
  double stderr_ = 0;
  std::size_t runs = 0;
};
Aggregate aggregate(const std::vector<double>& per_run);

/// Realises every design with the true lag-follower and scores Chamfer
/// against the goal.
EvalReport evaluate_path_method(const std::string& name, const Method& method, const Dataset& data,
                                const std::vector<std::size_t>& indices, const sim::FiberConfig& fiber = {});

/// Goals use the stored targets with obstacles redrawn from RNG stream
/// (seed, index), clear of the stored pose, so every method sees the same
/// placements for a given seed.
EvalReport evaluate_robot_method(const std::string& name, const Method& method, const Dataset& data,
                                 const std::vector<std::size_t>& indices, std::uint64_t seed = 0,
                                 const sim::ArmConfig& arm = {});

/// Test goals for the arm with the evaluation obstacles filled in.
RobotGoal robot_eval_goal(const Dataset& data, std::size_t index, std::uint64_t seed = 0,
                          const sim::ArmConfig& arm = {});

EvalReport evaluate_ballistic_method(const std::string& name, const Method& method, const Dataset& data,
                                     const std::vector<std::size_t>& indices, const sim::BallisticConfig& cfg = {});

/// Dispatch on data.task.
EvalReport evaluate_method(const std::string& name, const Method& method, const Dataset& data,
                           const std::vector<std::size_t>& indices, std::uint64_t seed = 0);

/// Median single-threaded wall time per goal over `repetitions` calls.
std::vector<double> time_inference(const Method& method, const std::vector<Eigen::MatrixXd>& goals, int repetitions);

double median(std::vector<double> values);

}  // namespace amortize::pipeline
