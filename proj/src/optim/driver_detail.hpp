#pragma once
// Shared internals of the solver drivers and the baselines. Not installed.
#include <optional>
#include <vector>

#include "ppfl/fedsim/shard.hpp"
#include "ppfl/graph/affinity.hpp"
#include "ppfl/metrics/trajectory.hpp"

namespace ppfl::detail {

void check_inputs(const RunConfig& cfg, const std::vector<ClientShard>& shards,
                  const AffinityGraph& graph);
BlockState init_state(const RunConfig& cfg, const std::vector<ClientShard>& shards,
                      const std::optional<BlockState>& init);
std::size_t sample_index(const std::vector<double>& weights, double u);
std::vector<std::size_t> snapshot_set(const RunConfig& cfg);
RoundRecord measure_round(std::size_t t, int block, const BlockState& z,
                          const std::vector<ClientShard>& shards, const AffinityGraph& graph,
                          const RunConfig& cfg, const CriterionRecord& crit,
                          const CommLedger& ledger, int threads);
std::vector<DenseMatrix> local_deltas(const BlockState& z, const std::vector<ClientShard>& shards,
                                      const RunConfig& cfg, double eta1, std::size_t round,
                                      const MembershipMatrix& C, int threads);
std::vector<double> client_weights(const std::vector<ClientShard>& shards);

}  // namespace ppfl::detail
