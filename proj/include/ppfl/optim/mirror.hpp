#pragma once
#include <cstdint>
#include <vector>

#include "ppfl/fedsim/shard.hpp"
#include "ppfl/graph/affinity.hpp"
#include "ppfl/optim/types.hpp"

namespace ppfl {

// Entropy mirror-descent (exponentiated-gradient) step on the simplex:
//   c+ = c .* exp(-eta g) / <c, exp(-eta g)>,
// max-shifted for overflow safety, then floored at eps and renormalized so
// every entry stays >= eps exactly.
MembershipVector exp_grad_step(const MembershipVector& c, const std::vector<double>& g,
                               double eta, double eps_floor);

// Execution context for one round of stochastic updates.
struct RoundCtx {
  std::uint64_t seed = 1;
  std::size_t round = 0;
  int threads = 1;
};

// Simultaneous (Jacobi) membership update: every client takes one mirror step
// against G_{c_i} = p_i grad_c f_i(c_i; theta, xi_i) + 2 lambda (L C)_i, with
// all Laplacian slices evaluated at the frozen pre-update C.
MembershipMatrix c_update(const CanonicalEnsemble& ens, const MembershipMatrix& C,
                          const std::vector<ClientShard>& shards, const AffinityGraph& g,
                          double lambda, double eta2, double eps_floor, const BatchSpec& batch,
                          Architecture arch, const RoundCtx& ctx);

// Stationarity measure at (theta, C), always with full gradients:
//   grad part  = | sum_i p_i grad_theta f_i |_F^2,
//   prox part  = (1/eta^2) * | C - C+ |_1^2 with C+ the full-gradient mirror step.
CriterionRecord criterion(const CanonicalEnsemble& ens, const MembershipMatrix& C,
                          const std::vector<ClientShard>& shards, const AffinityGraph& g,
                          double lambda, double eta, double eps_floor, Architecture arch,
                          int threads = 1);

}  // namespace ppfl
