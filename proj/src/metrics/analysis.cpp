#include "ppfl/metrics/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ppfl/core/error.hpp"
#include "ppfl/graph/affinity.hpp"
#include "ppfl/optim/objective.hpp"

namespace ppfl {

namespace {

// Best column matching: cost[a][b] = price of pairing truth column a with
// estimate column b. Exhaustive for K <= 6 (720 permutations), greedy beyond.
std::vector<std::size_t> best_permutation(const DenseMatrix& cost) {
  const std::size_t K = cost.rows;
  std::vector<std::size_t> perm(K), best(K);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  best = perm;
  if (K <= 6) {
    double best_total = std::numeric_limits<double>::infinity();
    do {
      double total = 0.0;
      for (std::size_t a = 0; a < K; ++a) total += cost(a, perm[a]);
      if (total < best_total) {
        best_total = total;
        best = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
  }
  // Greedy: repeatedly take the globally cheapest unused (row, column) pair.
  std::vector<bool> row_used(K, false), col_used(K, false);
  for (std::size_t step = 0; step < K; ++step) {
    double cheapest = std::numeric_limits<double>::infinity();
    std::size_t ra = 0, cb = 0;
    for (std::size_t a = 0; a < K; ++a) {
      if (row_used[a]) continue;
      for (std::size_t b = 0; b < K; ++b) {
        if (col_used[b]) continue;
        if (cost(a, b) < cheapest) {
          cheapest = cost(a, b);
          ra = a;
          cb = b;
        }
      }
    }
    row_used[ra] = col_used[cb] = true;
    best[ra] = cb;
  }
  return best;
}

}  // namespace

RecoveryResult membership_recovery_gap(const MembershipMatrix& C_hat,
                                       const MembershipMatrix& alpha_truth) {
  require(C_hat.M == alpha_truth.M && C_hat.K == alpha_truth.K,
          "membership_recovery_gap: shape mismatch");
  const std::size_t M = C_hat.M, K = C_hat.K;
  require(M > 0 && K > 0, "membership_recovery_gap: empty input");

  DenseMatrix cost(K, K);
  for (std::size_t a = 0; a < K; ++a)
    for (std::size_t b = 0; b < K; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < M; ++i)
        s += std::abs(alpha_truth.row(i)[a] - C_hat.row(i)[b]);
      cost(a, b) = s;
    }

  RecoveryResult out;
  out.perm = best_permutation(cost);
  out.per_client.resize(M);
  double total = 0.0;
  for (std::size_t i = 0; i < M; ++i) {
    double gap = 0.0;
    for (std::size_t a = 0; a < K; ++a)
      gap += std::abs(alpha_truth.row(i)[a] - C_hat.row(i)[out.perm[a]]);
    out.per_client[i] = 0.5 * gap;
    total += out.per_client[i];
  }
  out.mean = total / static_cast<double>(M);
  return out;
}

double group_identification_rate(const MembershipMatrix& C_hat,
                                 const std::vector<std::size_t>& group_truth) {
  const std::size_t M = C_hat.M, K = C_hat.K;
  require(group_truth.size() == M, "group_identification_rate: shape mismatch");
  require(M > 0 && K > 0, "group_identification_rate: empty input");
  std::size_t G = 0;
  for (std::size_t g : group_truth) G = std::max(G, g + 1);
  require(G <= K, "group_identification_rate: more groups than canonical models");

  // Confusion counts: hits(g, k) = clients of group g whose argmax is k.
  DenseMatrix hits(G, K);
  for (std::size_t i = 0; i < M; ++i) {
    const double* row = C_hat.row(i);
    std::size_t arg = 0;
    for (std::size_t k = 1; k < K; ++k)
      if (row[k] > row[arg]) arg = k;
    hits(group_truth[i], arg) += 1.0;
  }

  // Negated counts turn the matching into a min-cost problem. Pad groups to K
  // rows so injective maps fall out of the square matcher.
  DenseMatrix cost(K, K);
  for (std::size_t a = 0; a < K; ++a)
    for (std::size_t b = 0; b < K; ++b) cost(a, b) = a < G ? -hits(a, b) : 0.0;
  const std::vector<std::size_t> perm = best_permutation(cost);
  double matched = 0.0;
  for (std::size_t g = 0; g < G; ++g) matched += hits(g, perm[g]);
  return matched / static_cast<double>(M);
}

GlmmCheckResult glmm_equivalence_check(const CanonicalEnsemble& ens, const MembershipMatrix& C,
                                       const std::vector<ClientShard>& shards, double lambda) {
  const std::size_t M = shards.size();
  require(C.M == M && M > 0, "glmm_equivalence_check: client count mismatch");
  const std::size_t P = ens.theta.rows;  // parameter dimension per canonical
  const std::size_t K = ens.K();

  const AffinityGraph graph = AffinityGraph::all_ones(M);
  GlmmCheckResult out;
  out.f_ppfl =
      objective_value(ens, C, shards, graph, lambda, Architecture::parameter_mixture);

  // Deviation form. b_i = theta c_i evaluated through a one-column ensemble
  // so the loss side runs through an independent arithmetic path.
  Eigen::MatrixXd theta(P, K);
  for (std::size_t r = 0; r < P; ++r)
    for (std::size_t k = 0; k < K; ++k) theta(r, k) = ens.theta(r, k);
  Eigen::MatrixXd gram = theta.transpose() * theta;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
  require(lu.isInvertible(), "pseudo-inverse undefined under stated construction");
  Eigen::MatrixXd pinv = lu.inverse() * theta.transpose();  // K x P

  Eigen::MatrixXd B(P, M);
  CanonicalEnsemble single;
  single.link = ens.link;
  single.feature_dim = ens.feature_dim;
  single.n_classes = ens.n_classes;
  single.theta = DenseMatrix(P, 1);
  MembershipVector unit;
  unit.c = {1.0};

  double loss = 0.0;
  for (std::size_t i = 0; i < M; ++i) {
    Eigen::VectorXd ci(K);
    for (std::size_t k = 0; k < K; ++k) ci(k) = C.row(i)[k];
    B.col(i) = theta * ci;
    for (std::size_t r = 0; r < P; ++r) single.theta(r, 0) = B(r, i);
    loss += shards[i].weight *
            local_loss(single, unit, shards[i].train, Architecture::parameter_mixture);
  }
  const Eigen::VectorXd b0 = B.rowwise().mean();
  double reg = 0.0;
  for (std::size_t i = 0; i < M; ++i) {
    const Eigen::VectorXd dev = pinv * (B.col(i) - b0);
    reg += dev.squaredNorm();
  }
  out.f_glmm = loss + lambda * static_cast<double>(M) * reg;
  out.abs_diff = std::abs(out.f_ppfl - out.f_glmm);
  return out;
}

}  // namespace ppfl
