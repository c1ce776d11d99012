#include "ppfl/fedsim/shard.hpp"

#include <cmath>

#include "ppfl/core/error.hpp"

namespace ppfl {

void assign_weights_by_size(std::vector<ClientShard>& shards) {
  require(!shards.empty(), "no shards");
  std::size_t total = 0;
  for (const auto& s : shards) {
    require(s.train.n() > 0, "empty shard");
    total += s.train.n();
  }
  for (auto& s : shards)
    s.weight = static_cast<double>(s.train.n()) / static_cast<double>(total);
}

std::vector<double> label_histogram(const ClientShard& shard) {
  require(shard.train.task != Task::regression, "label histogram needs a classification task");
  const int C = shard.train.task == Task::binary ? 2 : shard.train.n_classes;
  std::vector<double> h(static_cast<std::size_t>(C), 0.0);
  for (double v : shard.train.y) h[static_cast<std::size_t>(v)] += 1.0;
  return h;
}

void validate_shards(const std::vector<ClientShard>& shards) {
  require(!shards.empty(), "no shards");
  double wsum = 0.0;
  for (std::size_t i = 0; i < shards.size(); ++i) {
    require(shards[i].id == i, "shard ids must be 0..M-1 in order");
    require(shards[i].weight > 0.0, "client weight must be positive");
    shards[i].train.validate();
    if (shards[i].test.n() > 0) shards[i].test.validate();
    wsum += shards[i].weight;
  }
  require(std::abs(wsum - 1.0) <= 1e-9, "client weights must sum to 1 within 1e-9");
}

}  // namespace ppfl
