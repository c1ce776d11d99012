#pragma once
#include <vector>

#include "ppfl/fedsim/shard.hpp"
#include "ppfl/optim/types.hpp"

namespace ppfl {

// Per-client metric (accuracy for classification, MSE for regression) plus
// the p_i-weighted average and the plain mean, both over included clients.
struct EvalResult {
  std::vector<double> per_client;  // NaN for excluded clients
  std::vector<bool> included;
  double weighted = 0.0;
  double mean = 0.0;
};

// Scores every client's split under its own membership row. Clients with an
// empty split are excluded with a warning on stderr.
EvalResult evaluate(const BlockState& state, const std::vector<ClientShard>& shards,
                    Architecture arch, bool use_test, int threads = 1);

}  // namespace ppfl
