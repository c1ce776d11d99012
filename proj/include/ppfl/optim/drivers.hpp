#pragma once
#include <optional>
#include <vector>

#include "ppfl/fedsim/shard.hpp"
#include "ppfl/graph/affinity.hpp"
#include "ppfl/metrics/trajectory.hpp"

namespace ppfl {

// Random block coordinate descent: each round flips an (rho1, rho2) coin and
// runs either a theta round (E local SGD steps per client + weighted delta
// aggregation) or a membership round (simultaneous mirror steps). The output
// index t' is sampled from the eta_t * min_h rho_h (1 - gamma_h L_h) weights.
RunTrajectory rbcd_run(const RunConfig& cfg, const std::vector<ClientShard>& shards,
                       const AffinityGraph& graph,
                       const std::optional<BlockState>& init = std::nullopt, int threads = 1);

// Communication-efficient variant: every round each client first takes one
// full-gradient mirror step on c_i (using the broadcast Laplacian slice),
// then E local theta steps conditioned on the fresh c_i; both travel back in
// one upload. Output index sampled uniformly.
RunTrajectory alternating_run(const RunConfig& cfg, const std::vector<ClientShard>& shards,
                              const AffinityGraph& graph,
                              const std::optional<BlockState>& init = std::nullopt,
                              int threads = 1);

}  // namespace ppfl
