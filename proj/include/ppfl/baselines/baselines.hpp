#pragma once
#include <vector>

#include "ppfl/fedsim/shard.hpp"
#include "ppfl/metrics/trajectory.hpp"

namespace ppfl {

// Single global model: the K=1, rho1=1, lambda=0 reduction of the RBCD
// solver, run verbatim through rbcd_run.
RunTrajectory run_fedavg(const std::vector<ClientShard>& shards, const RunConfig& cfg,
                         int threads = 1);

// Purely local training: one model column per client (fixed one-hot
// memberships), each client adopts its own E-step delta, nothing crosses the
// wire.
RunTrajectory run_local(const std::vector<ClientShard>& shards, const RunConfig& cfg,
                        int threads = 1);

// Hard-assignment clustered FL: K cluster models; every round each client
// joins the cluster whose model has the lowest train loss (ties to the lowest
// index), then FedAvg runs within each cluster with weights n_i / n_cluster.
// Empty clusters carry their model forward unchanged.
RunTrajectory run_clustered_fl(const std::vector<ClientShard>& shards, const RunConfig& cfg,
                               std::size_t K, int threads = 1);

}  // namespace ppfl
