#include "amortize/core/dataset.hpp"

#include "amortize/core/rng.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace amortize {

using nlohmann::json;

std::string_view to_string(TaskKind task) {
  switch (task) {
    case TaskKind::ballistic: return "ballistic";
    case TaskKind::fiber: return "fiber";
    case TaskKind::arm: return "arm";
  }
  return "unknown";
}

TaskKind parse_task(std::string_view name) {
  if (name == "ballistic") return TaskKind::ballistic;
  if (name == "fiber") return TaskKind::fiber;
  if (name == "arm") return TaskKind::arm;
  throw std::invalid_argument("unknown task '" + std::string(name) + "'");
}

std::vector<Sample> Dataset::subset(const std::vector<std::size_t>& indices) const {
  std::vector<Sample> out;
  out.reserve(indices.size());
  for (auto i : indices) out.push_back(samples.at(i));
  return out;
}

Dataset split_dataset(Dataset dataset, SplitFractions fractions, std::uint64_t seed) {
  const std::size_t n = dataset.samples.size();
  if (n == 0) throw std::invalid_argument("cannot split an empty dataset");
  if (fractions.train < 0 || fractions.val < 0 || fractions.test < 0) {
    throw std::invalid_argument("split fractions must be non-negative");
  }
  if (std::abs(fractions.train + fractions.val + fractions.test - 1.0) > 1e-9) {
    throw std::invalid_argument("split fractions must sum to 1");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed, 0x5b11u);
  for (std::size_t i = n - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(rng() % (i + 1));
    std::swap(order[i], order[j]);
  }

  // The slack absorbs representation error such as 40000 * 0.075 = 2999.9999...
  auto count = [n](double f) { return static_cast<std::size_t>(std::floor(static_cast<double>(n) * f + 1e-6)); };
  const std::size_t n_val = count(fractions.val);
  const std::size_t n_test = count(fractions.test);
  const std::size_t n_train = n - n_val - n_test;

  Split split;
  split.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  split.val.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train),
                   order.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
  split.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), order.end());
  dataset.split = std::move(split);
  return dataset;
}

namespace {

json matrix_to_json(const Eigen::MatrixXd& m) {
  if (m.cols() == 1) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) arr.push_back(m(i, 0));
    return arr;
  }
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  if (!j.is_array()) throw std::runtime_error("expected numeric array");
  if (j.empty()) return Eigen::MatrixXd(0, 1);
  if (!j.front().is_array()) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), 1);
    for (std::size_t i = 0; i < j.size(); ++i) m(static_cast<Eigen::Index>(i), 0) = j[i].get<double>();
    return m;
  }
  const auto cols = j.front().size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (j[i].size() != cols) throw std::runtime_error("ragged nested array");
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = j[i][c].get<double>();
    }
  }
  return m;
}

}  // namespace

void write_dataset(std::ostream& out, const Dataset& dataset) {
  json header = {{"format_version", 1},
                 {"task", std::string(to_string(dataset.task))},
                 {"seed", dataset.seed},
                 {"count", dataset.samples.size()},
                 {"split",
                  {{"train", dataset.split.train}, {"val", dataset.split.val}, {"test", dataset.split.test}}}};
  out << header.dump() << '\n';
  for (const auto& s : dataset.samples) {
    json line = {{"design", matrix_to_json(s.design)},
                 {"realization", matrix_to_json(s.realization)},
                 {"goal", matrix_to_json(s.goal)}};
    out << line.dump() << '\n';
  }
}

Dataset read_dataset(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("dataset is empty");
  const json header = json::parse(line);
  if (header.value("format_version", 0) != 1) throw std::runtime_error("unsupported dataset format_version");

  Dataset ds;
  ds.task = parse_task(header.at("task").get<std::string>());
  ds.seed = header.at("seed").get<std::uint64_t>();
  if (header.contains("split")) {
    const auto& sp = header["split"];
    ds.split.train = sp.value("train", std::vector<std::size_t>{});
    ds.split.val = sp.value("val", std::vector<std::size_t>{});
    ds.split.test = sp.value("test", std::vector<std::size_t>{});
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    ds.samples.push_back(
        {matrix_from_json(j.at("design")), matrix_from_json(j.at("realization")), matrix_from_json(j.at("goal"))});
  }
  if (header.contains("count") && header["count"].get<std::size_t>() != ds.samples.size()) {
    throw std::runtime_error("dataset sample count does not match header");
  }
  for (const auto* part : {&ds.split.train, &ds.split.val, &ds.split.test}) {
    for (auto i : *part) {
      if (i >= ds.samples.size()) throw std::runtime_error("split index out of range");
    }
  }
  return ds;
}

void save_dataset(const std::filesystem::path& path, const Dataset& dataset) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_dataset(out, dataset);
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_dataset(in);
}

std::string dataset_to_string(const Dataset& dataset) {
  std::ostringstream os;
  write_dataset(os, dataset);
  return os.str();
}

}  // namespace amortize
