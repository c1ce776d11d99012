#pragma once
#include <vector>

#include "ppfl/core/config.hpp"
#include "ppfl/fedsim/shard.hpp"
#include "ppfl/graph/affinity.hpp"
#include "ppfl/optim/types.hpp"

namespace ppfl {

// Top eigenvalue of a symmetric PSD matrix by power iteration with a fixed
// deterministic start vector.
double power_iteration_top_eig(const DenseMatrix& sym);

// Data-driven Lipschitz bounds.
//   L1 = curvature * max_i lambda_max(Xi' Xi / n_i)      (theta block)
//   L2 = max_i (p_i * L_c,i + 2 lambda d_ii)             (membership block)
// where L_c,i chains the same curvature bound through the per-sample linear
// predictors evaluated at the seeded initial ensemble. Curvature: 1 for the
// identity link, 1/4 for logit, 1/2 for softmax; the loss-mixture form is
// linear in c, so its L_c,i is 0. User-supplied overrides win when present.
SmoothnessEstimates estimate_smoothness(const std::vector<ClientShard>& shards,
                                        const RunConfig& config, const AffinityGraph& graph);
SmoothnessEstimates estimate_smoothness(const std::vector<ClientShard>& shards,
                                        const RunConfig& config, const AffinityGraph& graph,
                                        const CanonicalEnsemble& init);

// Step-size ceilings. The RBCD rate needs eta <= min{1/(32 E L1), 2/L2}; the
// alternating variant needs eta <= min{1/(16 L1), 1/L2} plus optional
// variance-dependent terms when those diagnostics are supplied.
double rbcd_eta_bound(std::size_t E, const SmoothnessEstimates& sm);
double alternating_eta_bound(const SmoothnessEstimates& sm, std::size_t T, double delta_F);

// Per-round output-sampling weights eta_t * min_h rho_h (1 - gamma_h L_h),
// the min taken over blocks with rho_h > 0. Throws (step_bound) when any
// weight is nonpositive.
std::vector<double> output_sampling_weights(const RunConfig& cfg, const SmoothnessEstimates& sm);

// Alternating-variant validation: every eta_t must sit at or below
// alternating_eta_bound. delta_F is the objective gap upper bound F(z0).
void validate_alternating_steps(const RunConfig& cfg, const SmoothnessEstimates& sm,
                                double delta_F);

}  // namespace ppfl
