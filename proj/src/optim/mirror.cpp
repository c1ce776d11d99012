#include "ppfl/optim/mirror.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ppfl/core/error.hpp"
#include "ppfl/core/parallel.hpp"
#include "ppfl/core/rng.hpp"

namespace ppfl {

MembershipVector exp_grad_step(const MembershipVector& c, const std::vector<double>& g,
                               double eta, double eps_floor) {
  const std::size_t K = c.c.size();
  require(g.size() == K, "exp_grad_step: gradient length mismatch");
  require(eta > 0.0 && std::isfinite(eta), "exp_grad_step: eta must be positive");
  for (double v : g) require(std::isfinite(v), "exp_grad_step: non-finite gradient");

  // Work in the log domain: u_k = ln(c_k) - eta g_k, shifted by max(u) so the
  // exponentials never overflow. ln(0) = -inf is harmless (exp gives 0).
  std::vector<double> u(K);
  double umax = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < K; ++k) {
    u[k] = std::log(c.c[k]) - eta * g[k];
    umax = std::max(umax, u[k]);
  }
  MembershipVector out;
  out.c.resize(K);
  double sum = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    out.c[k] = std::exp(u[k] - umax);
    sum += out.c[k];
  }
  for (double& v : out.c) v /= sum;

  // Floor in two passes: clamp + renormalize alone leaves clamped entries at
  // eps/(1+K eps), just under the floor. Re-clamp and charge the deficit to
  // the largest coordinate, which keeps the sum at 1 up to a few ulps.
  for (double& v : out.c) v = std::max(v, eps_floor);
  double s2 = 0.0;
  for (double v : out.c) s2 += v;
  for (double& v : out.c) v /= s2;
  const std::size_t top = static_cast<std::size_t>(
      std::max_element(out.c.begin(), out.c.end()) - out.c.begin());
  double deficit = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    if (out.c[k] < eps_floor) {
      deficit += eps_floor - out.c[k];
      out.c[k] = eps_floor;
    }
  }
  out.c[top] -= deficit;
  return out;
}

namespace {

std::vector<std::size_t> draw_with_replacement(RngStream& rng, std::size_t n, std::size_t count) {
  std::vector<std::size_t> idx(count);
  for (auto& v : idx) v = static_cast<std::size_t>(rng.uniform_int(n));
  return idx;
}

}  // namespace

MembershipMatrix c_update(const CanonicalEnsemble& ens, const MembershipMatrix& C,
                          const std::vector<ClientShard>& shards, const AffinityGraph& g,
                          double lambda, double eta2, double eps_floor, const BatchSpec& batch,
                          Architecture arch, const RoundCtx& ctx) {
  const std::size_t M = shards.size();
  require(C.M == M && g.M() == M, "c_update: client count mismatch");
  const std::size_t K = C.K;

  MembershipMatrix LC;
  if (lambda != 0.0) LC = laplacian_apply(g, C);

  MembershipMatrix out(M, K);
  parallel_for(M, ctx.threads, [&](std::size_t i) {
    std::vector<std::size_t> idx;
    if (!batch.full) {
      RngStream rng(rng_key(ctx.seed, ctx.round, i, rng_tag::c_batch));
      idx = draw_with_replacement(rng, shards[i].train.n(), batch.size);
    }
    MembershipVector ci = C.row_vec(i);
    std::vector<double> grad = grad_c(ens, ci, shards[i].train, arch, idx);
    for (std::size_t k = 0; k < K; ++k) {
      grad[k] *= shards[i].weight;
      if (lambda != 0.0) grad[k] += 2.0 * lambda * LC.row(i)[k];
    }
    out.set_row(i, exp_grad_step(ci, grad, eta2, eps_floor));
  });
  return out;
}

CriterionRecord criterion(const CanonicalEnsemble& ens, const MembershipMatrix& C,
                          const std::vector<ClientShard>& shards, const AffinityGraph& g,
                          double lambda, double eta, double eps_floor, Architecture arch,
                          int threads) {
  const std::size_t M = shards.size();
  require(C.M == M && g.M() == M, "criterion: client count mismatch");
  require(eta > 0.0, "criterion: eta must be positive");

  std::vector<DenseMatrix> grads(M);
  parallel_for(M, threads, [&](std::size_t i) {
    grads[i] = grad_theta(ens, C.row_vec(i), shards[i].train, arch);
  });
  DenseMatrix total(ens.theta.rows, ens.theta.cols);
  for (std::size_t i = 0; i < M; ++i) total.add_scaled(grads[i], shards[i].weight);

  MembershipMatrix Cplus =
      c_update(ens, C, shards, g, lambda, eta, eps_floor, BatchSpec{}, arch, RoundCtx{0, 0, threads});
  double l1 = 0.0;
  for (std::size_t i = 0; i < M; ++i)
    for (std::size_t k = 0; k < C.K; ++k) l1 += std::abs(C.row(i)[k] - Cplus.row(i)[k]);

  CriterionRecord rec;
  rec.grad_theta_norm_sq = total.frob_norm_sq();
  rec.prox_c_norm1_sq = (l1 * l1) / (eta * eta);
  rec.composite = rec.grad_theta_norm_sq + rec.prox_c_norm1_sq;
  return rec;
}

}  // namespace ppfl
