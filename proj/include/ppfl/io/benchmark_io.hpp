#pragma once
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ppfl/datagen/generators.hpp"
#include "ppfl/fedsim/shard.hpp"

namespace ppfl {

// A generated benchmark: shards plus whatever ground truth the generator
// produced, round-trippable through a directory of CSVs and manifest.json.
struct BenchmarkData {
  std::vector<ClientShard> shards;
  Task task = Task::regression;
  int n_classes = 0;
  std::optional<MixtureGroundTruth> mixture_truth;
  std::optional<std::vector<std::size_t>> group_truth;
  nlohmann::json generator_echo;  // config the benchmark was generated from
};

void save_benchmark(const BenchmarkData& data, const std::string& dir);
BenchmarkData load_benchmark(const std::string& dir);

}  // namespace ppfl
