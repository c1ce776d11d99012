#pragma once
#include <cstddef>
#include <vector>

#include "ppfl/core/dataset.hpp"

namespace ppfl {

// One simulated client: local train/test data plus its aggregation weight.
struct ClientShard {
  std::size_t id = 0;
  LabeledDataset train;
  LabeledDataset test;
  double weight = 0.0;  // p_i; defaults to n_i / n over train sizes
};

// Sets weight = train size / total train size; requires nonempty train shards.
void assign_weights_by_size(std::vector<ClientShard>& shards);

// Label-frequency vector of the train shard (classification only).
std::vector<double> label_histogram(const ClientShard& shard);

void validate_shards(const std::vector<ClientShard>& shards);

}  // namespace ppfl
