#include "amortize/pipeline/evaluate.hpp"

#include "amortize/core/parallel.hpp"
#include "amortize/core/rng.hpp"
#include "amortize/geometry/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace amortize::pipeline {

namespace {

constexpr std::uint64_t kEvalObstacleStream = 0xe7a1'0000'0000;

using Clock = std::chrono::steady_clock;

template <typename Score>
EvalReport run_eval(TaskKind task, const std::string& name, const Method& method,
                    const std::vector<std::size_t>& indices, const Score& score) {
  EvalReport report;
  report.task = std::string(to_string(task));
  report.method = name;
  report.records.resize(indices.size());
  parallel_for(indices.size(), [&](std::size_t k) {
    GoalRecord& rec = report.records[k];
    rec.method = name;
    rec.index = indices[k];
    try {
      score(indices[k], rec);
    } catch (const std::exception& e) {
      rec.success = false;
      rec.metric = std::numeric_limits<double>::quiet_NaN();
      rec.error = e.what();
    }
  });
  return report;
}

Eigen::MatrixXd timed(const Method& method, const Eigen::MatrixXd& goal, double& seconds) {
  const auto t0 = Clock::now();
  Eigen::MatrixXd design = method(goal);
  seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return design;
}

}  // namespace

EvalSummary EvalReport::summary() const {
  EvalSummary s;
  s.goals = records.size();
  double sum = 0;
  for (const auto& r : records) {
    if (!r.error.empty()) {
      ++s.failures;
      continue;
    }
    if (!r.success) continue;
    ++s.successes;
    sum += r.metric;
  }
  s.mean_metric = s.successes ? sum / static_cast<double>(s.successes) : std::numeric_limits<double>::quiet_NaN();
  return s;
}

void EvalReport::write_csv_header(std::ostream& out) { out << "run,method,index,metric,success,seconds,error\n"; }

void EvalReport::write_csv(std::ostream& out) const {
  write_csv_header(out);
  write_csv_rows(out);
}

void EvalReport::write_csv_rows(std::ostream& out) const {
  const auto old = out.precision(17);
  for (const auto& r : records) {
    std::string err = r.error;
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    out << run << ',' << r.method << ',' << r.index << ',' << r.metric << ',' << (r.success ? 1 : 0) << ',' << r.seconds << ','
        << err << '\n';
  }
  out.precision(old);
}

nlohmann::json EvalReport::summary_json() const {
  const auto s = summary();
  nlohmann::json j = {{"task", task},
                      {"method", method},
                      {"run", run},
                      {"goals", s.goals},
                      {"failures", s.failures},
                      {"successes", s.successes}};
  j["mean_metric"] = std::isfinite(s.mean_metric) ? nlohmann::json(s.mean_metric) : nlohmann::json(nullptr);
  return j;
}

Aggregate aggregate(const std::vector<double>& per_run) {
  Aggregate a;
  a.runs = per_run.size();
  if (per_run.empty()) return a;
  double sum = 0;
  for (double v : per_run) sum += v;
  a.mean = sum / static_cast<double>(per_run.size());
  if (per_run.size() > 1) {
    double ss = 0;
    for (double v : per_run) ss += (v - a.mean) * (v - a.mean);
    a.stderr_ = std::sqrt(ss / static_cast<double>(per_run.size() - 1)) / std::sqrt(static_cast<double>(per_run.size()));
  }
  return a;
}

EvalReport evaluate_path_method(const std::string& name, const Method& method, const Dataset& data,
                                const std::vector<std::size_t>& indices, const sim::FiberConfig& fiber) {
  return run_eval(TaskKind::fiber, name, method, indices, [&](std::size_t idx, GoalRecord& rec) {
    const Points goal = data.samples.at(idx).goal;
    const Points design = timed(method, goal, rec.seconds);
    rec.metric = geometry::chamfer(goal, sim::fiber_realize(design, fiber));
  });
}

RobotGoal robot_eval_goal(const Dataset& data, std::size_t index, std::uint64_t seed, const sim::ArmConfig& arm) {
  const Sample& s = data.samples.at(index);
  RobotGoal goal = RobotGoal::unpack(s.goal.col(0));
  const RobotRealization pose{s.realization, arm.top_mid_index()};
  Rng rng(seed + kEvalObstacleStream, index);
  goal.obstacle_center = sim::sample_obstacle(rng, &pose, {}, goal.obstacle_radius).center;
  return goal;
}

EvalReport evaluate_robot_method(const std::string& name, const Method& method, const Dataset& data,
                                 const std::vector<std::size_t>& indices, std::uint64_t seed,
                                 const sim::ArmConfig& arm) {
  return run_eval(TaskKind::arm, name, method, indices, [&](std::size_t idx, GoalRecord& rec) {
    const RobotGoal goal = robot_eval_goal(data, idx, seed, arm);
    const Eigen::MatrixXd design = timed(method, goal.pack(), rec.seconds);
    const RobotRealization u = sim::arm_realize(RobotDesign(design.col(0)), arm);
    rec.success = sim::min_vertex_distance(u.vertices, goal.obstacle_center) > goal.obstacle_radius;
    rec.metric = (u.top_mid() - goal.target).norm();
  });
}

EvalReport evaluate_ballistic_method(const std::string& name, const Method& method, const Dataset& data,
                                     const std::vector<std::size_t>& indices, const sim::BallisticConfig& cfg) {
  return run_eval(TaskKind::ballistic, name, method, indices, [&](std::size_t idx, GoalRecord& rec) {
    const Eigen::MatrixXd goal = data.samples.at(idx).goal;
    const Eigen::MatrixXd design = timed(method, goal, rec.seconds);
    rec.metric = std::abs(sim::ballistic_realize(design(0, 0), cfg) - goal(0, 0));
  });
}

EvalReport evaluate_method(const std::string& name, const Method& method, const Dataset& data,
                           const std::vector<std::size_t>& indices, std::uint64_t seed) {
  switch (data.task) {
    case TaskKind::ballistic: return evaluate_ballistic_method(name, method, data, indices);
    case TaskKind::fiber: return evaluate_path_method(name, method, data, indices);
    case TaskKind::arm: return evaluate_robot_method(name, method, data, indices, seed);
  }
  throw std::invalid_argument("unknown task");
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<double> time_inference(const Method& method, const std::vector<Eigen::MatrixXd>& goals, int repetitions) {
  if (repetitions < 1) throw std::invalid_argument("repetitions must be at least 1");
  std::vector<double> out;
  out.reserve(goals.size());
  for (const auto& goal : goals) {
    std::vector<double> times;
    for (int r = 0; r < repetitions; ++r) {
      double s = 0;
      timed(method, goal, s);
      times.push_back(s);
    }
    out.push_back(median(times));
  }
  return out;
}

}  // namespace amortize::pipeline
