#include "ppfl/baselines/baselines.hpp"

#include <algorithm>
#include <chrono>

#include "ppfl/core/error.hpp"
#include "ppfl/core/parallel.hpp"
#include "ppfl/core/rng.hpp"
#include "ppfl/optim/drivers.hpp"
#include "ppfl/optim/local_sgd.hpp"
#include "ppfl/optim/mirror.hpp"
#include "ppfl/optim/smoothness.hpp"
#include "../optim/driver_detail.hpp"

namespace ppfl {

RunTrajectory run_fedavg(const std::vector<ClientShard>& shards, const RunConfig& cfg,
                         int threads) {
  RunConfig fed = cfg;
  fed.K = 1;
  fed.rho1 = 1.0;
  fed.rho2 = 0.0;
  fed.lambda = 0.0;
  return rbcd_run(fed, shards, AffinityGraph::all_ones(shards.size()), std::nullopt, threads);
}

namespace {

MembershipMatrix one_hot_rows(const std::vector<std::size_t>& assign, std::size_t K) {
  MembershipMatrix C(assign.size(), K);
  for (std::size_t i = 0; i < assign.size(); ++i) C.row(i)[assign[i]] = 1.0;
  return C;
}

}  // namespace

RunTrajectory run_local(const std::vector<ClientShard>& shards, const RunConfig& cfg,
                        int threads) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t M = shards.size();
  const AffinityGraph graph = AffinityGraph::all_ones(M);

  RunConfig local = cfg;
  local.K = M;  // one model column per client
  local.lambda = 0.0;
  detail::check_inputs(local, shards, graph);

  RunTrajectory traj;
  traj.config = local;
  traj.task = shards.front().train.task;

  BlockState z = detail::init_state(local, shards, std::nullopt);
  std::vector<std::size_t> own(M);
  for (std::size_t i = 0; i < M; ++i) own[i] = i;
  z.C = one_hot_rows(own, M);

  traj.smoothness = estimate_smoothness(shards, local, graph, z.ens);
  traj.output_weights.assign(local.T, local.T > 0 ? 1.0 / static_cast<double>(local.T) : 0.0);
  traj.ledger.canonical_floats = z.ens.theta.rows;
  traj.ledger.K = M;

  const std::vector<std::size_t> snaps = detail::snapshot_set(local);
  if (local.T > 0) {
    RngStream out_rng(rng_key(local.seed, 0, kServer, rng_tag::output_index));
    traj.output_index = detail::sample_index(traj.output_weights, out_rng.uniform());
  }
  traj.output_state = z;

  for (std::size_t t = 0; t < local.T; ++t) {
    if (std::binary_search(snaps.begin(), snaps.end(), t)) traj.snapshots.emplace_back(t, z.C);
    const StepSizes st = StepSizes::from_eta(local.eta.at(t), local.E);
    const CriterionRecord crit = criterion(z.ens, z.C, shards, graph, 0.0, st.eta2,
                                           local.epsilon_floor, local.architecture, threads);
    if (t == traj.output_index) traj.output_state = z;

    // Every client adopts its own delta outright; columns never mix.
    const std::vector<DenseMatrix> deltas =
        detail::local_deltas(z, shards, local, st.eta1, t, z.C, threads);
    for (std::size_t i = 0; i < M; ++i) z.ens.theta.add_scaled(deltas[i], 1.0);
    require(z.ens.theta.all_finite(), "run_local: non-finite parameters");

    traj.rounds.push_back(
        detail::measure_round(t, 1, z, shards, graph, local, crit, traj.ledger, threads));
  }
  if (std::binary_search(snaps.begin(), snaps.end(), local.T))
    traj.snapshots.emplace_back(local.T, z.C);

  traj.final_state = z;
  traj.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return traj;
}

RunTrajectory run_clustered_fl(const std::vector<ClientShard>& shards, const RunConfig& cfg,
                               std::size_t K, int threads) {
  const auto t0 = std::chrono::steady_clock::now();
  require(K >= 1, "run_clustered_fl: K must be >= 1");
  const std::size_t M = shards.size();
  const AffinityGraph graph = AffinityGraph::all_ones(M);

  RunConfig clus = cfg;
  clus.K = K;
  clus.lambda = 0.0;
  clus.rho1 = 1.0;  // every round is a model round; reuse the theta-block
  clus.rho2 = 0.0;  // output-weight rule of the solver
  detail::check_inputs(clus, shards, graph);

  RunTrajectory traj;
  traj.config = clus;
  traj.task = shards.front().train.task;

  BlockState z = detail::init_state(clus, shards, std::nullopt);
  traj.smoothness = estimate_smoothness(shards, clus, graph, z.ens);
  traj.output_weights = output_sampling_weights(clus, traj.smoothness);
  traj.ledger.canonical_floats = z.ens.theta.rows;
  traj.ledger.K = K;

  const std::vector<std::size_t> snaps = detail::snapshot_set(clus);
  if (clus.T > 0) {
    RngStream out_rng(rng_key(clus.seed, 0, kServer, rng_tag::output_index));
    traj.output_index = detail::sample_index(traj.output_weights, out_rng.uniform());
  }

  std::vector<std::size_t> assign(M, 0);
  std::vector<MembershipVector> basis(K);
  for (std::size_t k = 0; k < K; ++k) {
    basis[k].c.assign(K, 0.0);
    basis[k].c[k] = 1.0;
  }
  traj.output_state = z;

  for (std::size_t t = 0; t < clus.T; ++t) {
    // Reassign against the current models, then proceed like a theta round.
    parallel_for(M, threads, [&](std::size_t i) {
      std::size_t best = 0;
      double best_loss = local_loss(z.ens, basis[0], shards[i].train, clus.architecture);
      for (std::size_t k = 1; k < K; ++k) {
        const double l = local_loss(z.ens, basis[k], shards[i].train, clus.architecture);
        if (l < best_loss) {
          best_loss = l;
          best = k;
        }
      }
      assign[i] = best;
    });
    z.C = one_hot_rows(assign, K);

    if (std::binary_search(snaps.begin(), snaps.end(), t)) traj.snapshots.emplace_back(t, z.C);
    const StepSizes st = StepSizes::from_eta(clus.eta.at(t), clus.E);
    const CriterionRecord crit = criterion(z.ens, z.C, shards, graph, 0.0, st.eta2,
                                           clus.epsilon_floor, clus.architecture, threads);
    if (t == traj.output_index) traj.output_state = z;

    const std::vector<DenseMatrix> deltas =
        detail::local_deltas(z, shards, clus, st.eta1, t, z.C, threads);
    for (std::size_t k = 0; k < K; ++k) {
      std::vector<DenseMatrix> part;
      std::vector<double> w;
      std::size_t nk = 0;
      for (std::size_t i = 0; i < M; ++i)
        if (assign[i] == k) nk += shards[i].train.n();
      for (std::size_t i = 0; i < M; ++i) {
        if (assign[i] != k) continue;
        part.push_back(deltas[i]);
        w.push_back(static_cast<double>(shards[i].train.n()) / static_cast<double>(nk));
      }
      if (part.empty()) continue;  // empty cluster: model carried forward
      z.ens = theta_aggregate(z.ens, part, w);
    }
    traj.ledger.add_clustered_round(M);

    traj.rounds.push_back(
        detail::measure_round(t, 1, z, shards, graph, clus, crit, traj.ledger, threads));
  }
  if (std::binary_search(snaps.begin(), snaps.end(), clus.T))
    traj.snapshots.emplace_back(clus.T, z.C);

  traj.final_state = z;
  traj.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return traj;
}

}  // namespace ppfl
