#pragma once
#include <vector>

#include "ppfl/fedsim/shard.hpp"
#include "ppfl/graph/affinity.hpp"
#include "ppfl/optim/types.hpp"

namespace ppfl {

// Weighted empirical loss sum_i p_i f_i(theta, c_i) over full shards.
double weighted_loss(const CanonicalEnsemble& ens, const MembershipMatrix& C,
                     const std::vector<ClientShard>& shards, Architecture arch,
                     int threads = 1);

// Full objective F = sum_i p_i f_i + lambda * C^T L C.
double objective_value(const CanonicalEnsemble& ens, const MembershipMatrix& C,
                       const std::vector<ClientShard>& shards, const AffinityGraph& g,
                       double lambda, Architecture arch, int threads = 1);

// Linearized-coupling upper bound on F at anchor C_t:
//   S(C) = sum_i p_i f_i(theta, c_i) + lambda * C^T (D (x) I) C
//        - lambda * [ C_t^T (W (x) I) C_t + 2 ((W (x) I) C_t)^T (C - C_t) ].
// Majorizes F whenever W is PSD; equals F at C = C_t.
double surrogate_value(const CanonicalEnsemble& ens, const MembershipMatrix& C,
                       const MembershipMatrix& C_anchor, const std::vector<ClientShard>& shards,
                       const AffinityGraph& g, double lambda, Architecture arch,
                       int threads = 1);

}  // namespace ppfl
