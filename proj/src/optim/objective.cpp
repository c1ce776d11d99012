#include "ppfl/optim/objective.hpp"

#include "ppfl/core/parallel.hpp"

namespace ppfl {

double weighted_loss(const CanonicalEnsemble& ens, const MembershipMatrix& C,
                     const std::vector<ClientShard>& shards, Architecture arch, int threads) {
  require(C.M == shards.size(), "membership rows must match client count");
  std::vector<double> losses(shards.size());
  parallel_for(shards.size(), threads, [&](std::size_t i) {
    losses[i] = local_loss(ens, C.row_vec(i), shards[i].train, arch);
  });
  double f = 0.0;
  for (std::size_t i = 0; i < shards.size(); ++i) f += shards[i].weight * losses[i];
  return f;
}

double objective_value(const CanonicalEnsemble& ens, const MembershipMatrix& C,
                       const std::vector<ClientShard>& shards, const AffinityGraph& g,
                       double lambda, Architecture arch, int threads) {
  double f = weighted_loss(ens, C, shards, arch, threads);
  if (lambda != 0.0) f += lambda * laplacian_quadratic(g, C);
  return f;
}

double surrogate_value(const CanonicalEnsemble& ens, const MembershipMatrix& C,
                       const MembershipMatrix& C_anchor, const std::vector<ClientShard>& shards,
                       const AffinityGraph& g, double lambda, Architecture arch, int threads) {
  require(C.M == C_anchor.M && C.K == C_anchor.K, "anchor shape mismatch");
  require(C.M == g.M(), "membership rows must match graph size");

  double s = weighted_loss(ens, C, shards, arch, threads);
  if (lambda == 0.0) return s;

  // D (x) I block i is d_ii * c_i; W (x) I block i is sum_j w_ij c_j.
  double quad_d = 0.0;
  for (std::size_t i = 0; i < C.M; ++i) {
    const double* ci = C.row(i);
    double nd = 0.0;
    for (std::size_t k = 0; k < C.K; ++k) nd += ci[k] * ci[k];
    quad_d += g.degree[i] * nd;
  }

  double anchor_w = 0.0;   // C_t^T (W (x) I) C_t
  double linear_w = 0.0;   // ((W (x) I) C_t)^T (C - C_t)
  for (std::size_t i = 0; i < C.M; ++i) {
    std::vector<double> wci(C.K, 0.0);
    for (std::size_t j = 0; j < C.M; ++j) {
      const double w = g.W(i, j);
      if (w == 0.0) continue;
      const double* cj = C_anchor.row(j);
      for (std::size_t k = 0; k < C.K; ++k) wci[k] += w * cj[k];
    }
    const double* ca = C_anchor.row(i);
    const double* cc = C.row(i);
    for (std::size_t k = 0; k < C.K; ++k) {
      anchor_w += wci[k] * ca[k];
      linear_w += wci[k] * (cc[k] - ca[k]);
    }
  }

  return s + lambda * quad_d - lambda * (anchor_w + 2.0 * linear_w);
}

}  // namespace ppfl
