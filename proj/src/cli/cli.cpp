#include "amortize/cli/cli.hpp"

#include "amortize/cli/svg.hpp"
#include "amortize/core/dataset.hpp"
#include "amortize/geometry/metrics.hpp"
#include "amortize/pipeline/evaluate.hpp"
#include "amortize/pipeline/generate.hpp"
#include "amortize/pipeline/models.hpp"
#include "amortize/pipeline/solve.hpp"
#include "amortize/pipeline/train.hpp"
#include "amortize/sim/arm.hpp"
#include "amortize/sim/fiber.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace amortize::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using pipeline::ModelKind;

namespace {

/// Bad invocation: reported with exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require_file(const std::string& path, const char* what) {
  if (path.empty()) throw UsageError(std::string("missing ") + what);
  if (!fs::is_regular_file(path)) throw UsageError(std::string(what) + " '" + path + "' does not exist");
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
  if (!f) throw std::runtime_error("failed writing " + path.string());
}

std::vector<int> parse_hidden(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size() || v < 0) throw std::invalid_argument(item);
      if (v > 0) out.push_back(v);
    } catch (const std::exception&) {
      throw UsageError("--hidden expects comma-separated non-negative widths, got '" + text + "'");
    }
  }
  return out;
}

// JSON config values become flags placed before the real ones, so explicit
// flags win (every option keeps its last value).
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::string config;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file");
      config = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (config.empty()) return rest;
  require_file(config, "config file");
  json j;
  try {
    std::ifstream f(config);
    j = json::parse(f);
  } catch (const json::exception& e) {
    throw UsageError("config file '" + config + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw UsageError("config file must hold a JSON object");
  std::vector<std::string> injected;
  for (const auto& [key, value] : j.items()) {
    const std::string flag = "--" + key;
    if (value.is_boolean()) {
      if (value.get<bool>()) injected.push_back(flag);
    } else if (value.is_array()) {
      std::string joined;
      for (const auto& v : value) joined += (joined.empty() ? "" : ",") + (v.is_string() ? v.get<std::string>() : v.dump());
      injected.insert(injected.end(), {flag, joined});
    } else if (value.is_string()) {
      injected.insert(injected.end(), {flag, value.get<std::string>()});
    } else {
      injected.insert(injected.end(), {flag, value.dump()});
    }
  }
  // Program name, subcommand, config values, then the explicit flags.
  std::vector<std::string> out;
  std::size_t pos = 0;
  for (; pos < rest.size() && pos < 2; ++pos) out.push_back(rest[pos]);
  out.insert(out.end(), injected.begin(), injected.end());
  out.insert(out.end(), rest.begin() + static_cast<std::ptrdiff_t>(pos), rest.end());
  return out;
}

Dataset load_data(const std::string& path) {
  require_file(path, "dataset");
  return load_dataset(path);
}

pipeline::Model load_checked_model(const std::string& path, TaskKind task) {
  require_file(path, "model checkpoint");
  auto model = pipeline::load_model(path);
  if (model.info.task != task) {
    throw UsageError("model '" + path + "' was trained for task " + std::string(to_string(model.info.task)) +
                     ", dataset is " + std::string(to_string(task)));
  }
  return model;
}

// Enum parsers throw invalid_argument; a bad value is a usage error here.
template <class F>
auto parse_arg(F&& parse, const std::string& value) {
  try {
    return parse(value);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

const std::vector<std::size_t>& split_indices(const Dataset& data, const std::string& split) {
  if (split == "test") return data.split.test;
  if (split == "val") return data.split.val;
  if (split == "train") return data.split.train;
  throw UsageError("unknown split '" + split + "'");
}

// ----------------------------------------------------------------------- gen

struct GenArgs {
  std::string task;
  int count = 0;
  std::uint64_t seed = 0;
  std::string out;
  int n_points = 200;
  int iters = 200;
  double length_scale = 0.1;
  double lag = 0.15;
};

int cmd_gen(const GenArgs& a, std::ostream& out) {
  if (a.count < 1) throw UsageError("--count must be at least 1");
  const TaskKind task = parse_arg(parse_task, a.task);
  pipeline::GenConfig cfg;
  cfg.sampler.n_points = a.n_points;
  cfg.sampler.iters_per_path = a.iters;
  cfg.sampler.length_scale = a.length_scale;
  cfg.fiber.lag = a.lag;
  if (task == TaskKind::fiber) {
    if (a.n_points < 4) throw UsageError("--n-points must be at least 4");
    if (a.iters < 0) throw UsageError("--iters must be non-negative");
    if (!(a.length_scale > 0)) throw UsageError("--length-scale must be positive");
    if (!(a.lag >= 0)) throw UsageError("--lag must be non-negative");
  }
  const Dataset data = pipeline::gen_dataset(task, a.count, a.seed, cfg);
  write_text(a.out, dataset_to_string(data));
  out << "wrote " << data.size() << " " << to_string(task) << " samples (seed " << a.seed << ", train "
      << data.split.train.size() << ", val " << data.split.val.size() << ", test " << data.split.test.size()
      << ") to " << a.out << '\n';
  return kExitOk;
}

// --------------------------------------------------------------------- train

struct TrainArgs {
  std::string data;
  std::string model;
  std::string decoder;
  std::string out;
  std::string loss_csv;
  std::optional<int> epochs;
  std::optional<double> lr;
  std::optional<double> lr_decay;
  std::optional<int> batch;
  std::optional<double> lambda;
  std::uint64_t seed = 0;
  std::optional<std::string> hidden;
  bool quiet = false;
};

int cmd_train(const TrainArgs& a, std::ostream& out) {
  const ModelKind kind = parse_arg(pipeline::parse_model, a.model);
  if (kind == ModelKind::encoder && a.decoder.empty()) throw UsageError("encoder training needs --decoder");
  const Dataset data = load_data(a.data);

  pipeline::TrainConfig cfg = pipeline::TrainConfig::defaults(data.task, kind);
  if (a.epochs) cfg.epochs = *a.epochs;
  if (a.lr) cfg.lr = *a.lr;
  if (a.lr_decay) cfg.lr_decay = *a.lr_decay;
  if (a.batch) cfg.batch_size = *a.batch;
  if (a.lambda) cfg.lambda = *a.lambda;
  if (a.hidden) cfg.hidden = parse_hidden(*a.hidden);
  cfg.seed = a.seed;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  std::optional<pipeline::Model> decoder;
  if (kind == ModelKind::encoder) {
    decoder = load_checked_model(a.decoder, data.task);
    if (decoder->info.kind != ModelKind::decoder) throw UsageError("--decoder must be a decoder checkpoint");
  }

  const auto result = pipeline::train_model(data, cfg, decoder ? &decoder->mlp : nullptr,
                                            [&](const pipeline::EpochStats& e) {
                                              if (!a.quiet) {
                                                out << "epoch " << e.epoch << " train " << e.train_loss << " val "
                                                    << e.val_loss << '\n';
                                              }
                                            });
  pipeline::save_model(a.out, {result.mlp, {data.task, kind, cfg.seed, cfg.lambda}});

  std::ostringstream csv;
  csv << std::setprecision(17) << "epoch,train_loss,val_loss,lr\n";
  for (const auto& e : result.history) csv << e.epoch << ',' << e.train_loss << ',' << e.val_loss << ',' << e.lr << '\n';
  const std::string loss_path = a.loss_csv.empty() ? fs::path(a.out).replace_extension(".loss.csv").string() : a.loss_csv;
  write_text(loss_path, csv.str());
  out << "wrote " << a.out << " and " << loss_path << '\n';
  return kExitOk;
}

// ------------------------------------------------------------ method lookup

struct MethodArgs {
  std::string method;
  std::vector<std::string> models;
  int max_iter = 1000;
  std::optional<double> lambda_do;
};

struct NamedMethod {
  int run = 0;
  pipeline::Method method;
};

// One entry per run: each checkpoint is a run; model-free methods run once.
std::vector<NamedMethod> build_methods(const MethodArgs& a, TaskKind task) {
  std::vector<NamedMethod> out;
  if (a.method == "identity" || a.method == "rest") {
    if (a.method == "identity" && task != TaskKind::fiber) throw UsageError("identity method is for the fiber task");
    if (a.method == "rest" && task != TaskKind::arm) throw UsageError("rest method is for the arm task");
    out.push_back({0, a.method == "identity" ? pipeline::identity_method() : pipeline::rest_method()});
    return out;
  }
  if (a.models.empty()) throw UsageError("method '" + a.method + "' needs --model");
  for (const auto& path : a.models) {
    const auto model = load_checked_model(path, task);
    const int run = static_cast<int>(model.info.seed);
    if (a.method == "encoder" || a.method == "direct_learning") {
      const ModelKind want = a.method == "encoder" ? ModelKind::encoder : ModelKind::direct;
      if (model.info.kind != want) throw UsageError("'" + path + "' is not a " + a.method + " checkpoint");
      out.push_back({run, pipeline::network_method(task, model.mlp)});
    } else if (a.method == "direct_optimize") {
      if (model.info.kind != ModelKind::decoder) throw UsageError("direct_optimize needs a decoder checkpoint");
      pipeline::DirectOptConfig cfg;
      cfg.bfgs.max_iterations = a.max_iter;
      if (a.lambda_do) cfg.lambda_do = *a.lambda_do;
      out.push_back({run, pipeline::direct_method(task, model.mlp, cfg)});
    } else {
      throw UsageError("unknown method '" + a.method + "'");
    }
  }
  return out;
}

void add_method_options(CLI::App* sub, MethodArgs& m) {
  sub->add_option("--method", m.method, "encoder | direct_learning | direct_optimize | identity | rest")->required();
  sub->add_option("--model", m.models, "checkpoint; repeat (or comma-separate) for repeated runs")
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  sub->add_option("--max-iter", m.max_iter, "BFGS iteration cap for direct_optimize")->check(CLI::PositiveNumber);
  sub->add_option("--lambda-do", m.lambda_do, "evenness weight for direct_optimize (path task)");
}

// --------------------------------------------------------------------- solve

struct SolveArgs {
  std::string data;
  std::size_t index = 0;
  MethodArgs method;
  std::string out;
};

json design_json(TaskKind task, const Eigen::MatrixXd& design) {
  if (task == TaskKind::fiber) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < design.rows(); ++i) rows.push_back({design(i, 0), design(i, 1)});
    return rows;
  }
  return std::vector<double>(design.data(), design.data() + design.size());
}

int cmd_solve(const SolveArgs& a, std::ostream& out) {
  const Dataset data = load_data(a.data);
  if (a.index >= data.size()) throw UsageError("--index out of range");
  const auto methods = build_methods(a.method, data.task);
  Eigen::MatrixXd goal = data.samples[a.index].goal;
  if (data.task == TaskKind::arm) goal = pipeline::robot_eval_goal(data, a.index).pack();
  const Eigen::MatrixXd design = methods.front().method(goal);
  const json j = {{"task", std::string(to_string(data.task))},
                  {"index", a.index},
                  {"method", a.method.method},
                  {"design", design_json(data.task, design)}};
  if (a.out.empty()) {
    out << j.dump() << '\n';
  } else {
    write_text(a.out, j.dump(2) + "\n");
    out << "wrote " << a.out << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------------- eval

struct EvalArgs {
  std::string data;
  MethodArgs method;
  std::string split = "test";
  std::uint64_t seed = 0;
  std::optional<std::size_t> limit;
  std::string out;
};

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  const Dataset data = load_data(a.data);
  std::vector<std::size_t> indices = split_indices(data, a.split);
  if (a.limit && *a.limit < indices.size()) indices.resize(*a.limit);
  const auto methods = build_methods(a.method, data.task);

  std::ostringstream csv;
  pipeline::EvalReport::write_csv_header(csv);
  json runs = json::array();
  std::vector<double> metrics;
  std::vector<double> successes;
  for (const auto& m : methods) {
    auto report = pipeline::evaluate_method(a.method.method, m.method, data, indices, a.seed);
    report.run = m.run;
    report.write_csv_rows(csv);
    const auto s = report.summary();
    runs.push_back(report.summary_json());
    if (s.successes > 0) metrics.push_back(s.mean_metric);
    successes.push_back(static_cast<double>(s.successes));
  }
  const auto metric = pipeline::aggregate(metrics);
  const auto success = pipeline::aggregate(successes);
  json summary = {{"task", std::string(to_string(data.task))},
                  {"method", a.method.method},
                  {"split", a.split},
                  {"goals", indices.size()},
                  {"runs", runs},
                  {"metric_mean", metric.runs ? json(metric.mean) : json(nullptr)},
                  {"metric_stderr", metric.runs ? json(metric.stderr_) : json(nullptr)},
                  {"successes_mean", success.mean},
                  {"successes_stderr", success.stderr_}};
  write_text(a.out + ".csv", csv.str());
  write_text(a.out + ".json", summary.dump(2) + "\n");
  out << a.method.method << ": " << indices.size() << " goals, " << methods.size() << " run(s)";
  if (metric.runs) out << ", metric " << metric.mean << " +- " << metric.stderr_;
  if (data.task == TaskKind::arm) out << ", successes " << success.mean << " +- " << success.stderr_;
  out << "\nwrote " << a.out << ".csv and " << a.out << ".json\n";
  return kExitOk;
}

// --------------------------------------------------------------------- bench

struct BenchArgs {
  std::string data;
  MethodArgs method;
  std::size_t count = 5;
  int reps = 5;
  std::string out;
};

int cmd_bench(const BenchArgs& a, std::ostream& out) {
  if (a.reps < 1) throw UsageError("--reps must be at least 1");
  const Dataset data = load_data(a.data);
  std::vector<std::size_t> indices = data.split.test;
  if (a.count < indices.size()) indices.resize(a.count);
  auto methods = build_methods(a.method, data.task);
  std::vector<Eigen::MatrixXd> goals;
  for (auto i : indices) {
    goals.push_back(data.task == TaskKind::arm ? Eigen::MatrixXd(pipeline::robot_eval_goal(data, i).pack())
                                               : data.samples[i].goal);
  }
  const auto times = goals.empty() ? std::vector<double>{} : pipeline::time_inference(methods.front().method, goals, a.reps);
  std::ostringstream csv;
  csv << std::setprecision(9) << "method,index,median_seconds,repetitions\n";
  for (std::size_t k = 0; k < times.size(); ++k) {
    csv << a.method.method << ',' << indices[k] << ',' << times[k] << ',' << a.reps << '\n';
  }
  const json summary = {{"method", a.method.method},
                        {"goals", times.size()},
                        {"repetitions", a.reps},
                        {"median_seconds", times.empty() ? json(nullptr) : json(pipeline::median(times))}};
  write_text(a.out + ".csv", csv.str());
  write_text(a.out + ".json", summary.dump(2) + "\n");
  out << a.method.method << ": median " << (times.empty() ? 0.0 : pipeline::median(times)) << " s over "
      << times.size() << " goals x " << a.reps << " repetitions\n";
  return kExitOk;
}

// ---------------------------------------------------------------------- plot

struct PlotArgs {
  std::string task;
  std::string data;
  std::size_t index = 0;
  MethodArgs method;
  std::string out;
};

int cmd_plot(PlotArgs a, std::ostream& out) {
  std::string svg;
  if (a.data.empty()) {
    if (a.task != "arm") throw UsageError("plot without --data draws the arm rest pose; pass --task arm");
    svg = arm_pose_svg(sim::arm_rest_vertices(), nullptr, 0, nullptr);
  } else {
    const Dataset data = load_data(a.data);
    if (a.index >= data.size()) throw UsageError("--index out of range");
    if (a.method.method.empty()) a.method.method = data.task == TaskKind::arm ? "rest" : "identity";
    if (data.task == TaskKind::ballistic) throw UsageError("plotting is available for the fiber and arm tasks");
    const auto methods = build_methods(a.method, data.task);
    if (data.task == TaskKind::fiber) {
      const Points goal = data.samples[a.index].goal;
      const Points design = methods.front().method(goal);
      svg = path_overlay_svg(goal, design, sim::fiber_realize(design));
    } else {
      const RobotGoal goal = pipeline::robot_eval_goal(data, a.index);
      const Eigen::MatrixXd design = methods.front().method(goal.pack());
      const auto pose = sim::arm_realize(RobotDesign(design.col(0)));
      svg = arm_pose_svg(pose.vertices, &goal.obstacle_center, goal.obstacle_radius, &goal.target);
    }
  }
  write_text(a.out, svg);
  out << "wrote " << a.out << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Amortized design synthesis: datasets, training, solving and evaluation"};
  app.name(raw_args.empty() ? "amortize" : fs::path(raw_args[0]).filename().string());
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_help_all_flag("--help-all");
  std::string config_file;
  app.add_option("--config", config_file, "JSON file of option values; explicit flags win");

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate a dataset");
  gen_cmd->add_option("--task", gen.task, "ballistic | fiber | arm")->required();
  gen_cmd->add_option("--count", gen.count, "number of samples")->required();
  gen_cmd->add_option("--seed", gen.seed);
  gen_cmd->add_option("--out", gen.out, "output NDJSON file")->required();
  gen_cmd->add_option("--n-points", gen.n_points, "points per sampled path");
  gen_cmd->add_option("--iters", gen.iters, "sampler steps per path");
  gen_cmd->add_option("--length-scale", gen.length_scale);
  gen_cmd->add_option("--lag", gen.lag, "fiber lag length");

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "train a decoder, encoder or direct-learning model");
  train_cmd->add_option("--data", train.data)->required();
  train_cmd->add_option("--model", train.model, "decoder | encoder | direct")->required();
  train_cmd->add_option("--decoder", train.decoder, "trained decoder (encoder mode)");
  train_cmd->add_option("--out", train.out, "checkpoint JSON")->required();
  train_cmd->add_option("--loss-csv", train.loss_csv, "per-epoch losses (default: next to the checkpoint)");
  train_cmd->add_option("--epochs", train.epochs);
  train_cmd->add_option("--lr", train.lr);
  train_cmd->add_option("--lr-decay", train.lr_decay);
  train_cmd->add_option("--batch", train.batch);
  train_cmd->add_option("--lambda", train.lambda, "regulariser weight");
  train_cmd->add_option("--seed", train.seed);
  train_cmd->add_option("--hidden", train.hidden, "hidden widths, e.g. 128,256,128; 0 for a linear model");
  train_cmd->add_flag("--quiet", train.quiet);

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "design for one dataset goal");
  solve_cmd->add_option("--data", solve.data)->required();
  solve_cmd->add_option("--index", solve.index)->required();
  solve_cmd->add_option("--out", solve.out, "design JSON (default: stdout)");
  add_method_options(solve_cmd, solve.method);

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a method on a split with the true simulator");
  eval_cmd->add_option("--data", eval.data)->required();
  eval_cmd->add_option("--split", eval.split, "test | val | train");
  eval_cmd->add_option("--seed", eval.seed, "obstacle placement seed (arm)");
  eval_cmd->add_option("--limit", eval.limit, "evaluate only the first N goals");
  eval_cmd->add_option("--out", eval.out, "report prefix; writes .csv and .json")->required();
  add_method_options(eval_cmd, eval.method);

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "time per-goal inference");
  bench_cmd->add_option("--data", bench.data)->required();
  bench_cmd->add_option("--count", bench.count, "number of test goals");
  bench_cmd->add_option("--reps", bench.reps, "repetitions per goal");
  bench_cmd->add_option("--out", bench.out, "report prefix; writes .csv and .json")->required();
  add_method_options(bench_cmd, bench.method);

  PlotArgs plot;
  auto* plot_cmd = app.add_subcommand("plot", "draw a goal/design/realisation as SVG");
  plot_cmd->add_option("--task", plot.task, "task when drawing without data (arm rest pose)");
  plot_cmd->add_option("--data", plot.data);
  plot_cmd->add_option("--index", plot.index);
  plot_cmd->add_option("--method", plot.method.method, "default: identity (fiber) or rest (arm)");
  plot_cmd->add_option("--model", plot.method.models)->delimiter(',');
  plot_cmd->add_option("--max-iter", plot.method.max_iter);
  plot_cmd->add_option("--out", plot.out, "SVG file")->required();

  try {
    std::vector<std::string> args = expand_config(raw_args);
    std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (gen_cmd->parsed()) return cmd_gen(gen, out);
    if (train_cmd->parsed()) return cmd_train(train, out);
    if (solve_cmd->parsed()) return cmd_solve(solve, out);
    if (eval_cmd->parsed()) return cmd_eval(eval, out);
    if (bench_cmd->parsed()) return cmd_bench(bench, out);
    if (plot_cmd->parsed()) return cmd_plot(plot, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace amortize::cli
