#pragma once

#include "amortize/core/types.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace amortize {

enum class TaskKind { ballistic, fiber, arm };

std::string_view to_string(TaskKind task);
TaskKind parse_task(std::string_view name);

/// One (design, realization, goal) triple. Vector-valued fields are stored as
/// single-column matrices; point sets as n x 2.
struct Sample {
  Eigen::MatrixXd design;
  Eigen::MatrixXd realization;
  Eigen::MatrixXd goal;
};

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;

  bool empty() const { return train.empty() && val.empty() && test.empty(); }
};

struct Dataset {
  TaskKind task = TaskKind::fiber;
  std::uint64_t seed = 0;
  std::vector<Sample> samples;
  Split split;

  std::size_t size() const { return samples.size(); }
  std::vector<Sample> subset(const std::vector<std::size_t>& indices) const;
};

struct SplitFractions {
  double train = 0.9;
  double val = 0.05;
  double test = 0.05;
};

/// Deterministic shuffle then floor-rounded partition; rounding remainder goes
/// to the training set.
Dataset split_dataset(Dataset dataset, SplitFractions fractions, std::uint64_t seed);

// Newline-delimited JSON: one header object, then one object per sample.
void write_dataset(std::ostream& out, const Dataset& dataset);
Dataset read_dataset(std::istream& in);
void save_dataset(const std::filesystem::path& path, const Dataset& dataset);
Dataset load_dataset(const std::filesystem::path& path);
std::string dataset_to_string(const Dataset& dataset);

}  // namespace amortize
