#pragma once
#include <vector>

#include "ppfl/core/rng.hpp"
#include "ppfl/fedsim/shard.hpp"
#include "ppfl/optim/types.hpp"

namespace ppfl {

// E local SGD steps on theta with the membership frozen; returns the
// accumulated delta theta_{i,E} - theta (param_dim x K). Mini-batches are
// drawn i.i.d. uniform with replacement from the client's train split.
DenseMatrix theta_local_steps(const CanonicalEnsemble& ens, const MembershipVector& c_i,
                              const LabeledDataset& train, Architecture arch, std::size_t E,
                              double eta1, const BatchSpec& batch, RngStream& rng);

// Server-side aggregation theta + sum_i w_i delta_i, applied in the order
// given (ascending client order everywhere in this codebase, so reduction
// identities between solvers hold bit-exactly). Weights must sum to 1.
CanonicalEnsemble theta_aggregate(const CanonicalEnsemble& ens,
                                  const std::vector<DenseMatrix>& deltas,
                                  const std::vector<double>& weights);

}  // namespace ppfl
