#include "ppfl/optim/drivers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "ppfl/core/error.hpp"
#include "ppfl/core/parallel.hpp"
#include "ppfl/core/rng.hpp"
#include "ppfl/fedsim/evaluate.hpp"
#include "ppfl/optim/local_sgd.hpp"
#include "ppfl/optim/mirror.hpp"
#include "ppfl/optim/objective.hpp"
#include "ppfl/optim/smoothness.hpp"
#include "driver_detail.hpp"

namespace ppfl {

namespace detail {

void check_inputs(const RunConfig& cfg, const std::vector<ClientShard>& shards,
                  const AffinityGraph& graph) {
  cfg.validate();
  validate_shards(shards);
  require(graph.M() == shards.size(), "graph size must match client count");
  require(cfg.M == 0 || cfg.M == shards.size(), "config M does not match the data");
  for (std::size_t r : cfg.effective_snapshot_rounds())
    require(r <= cfg.T, "snapshot round beyond T");
}

BlockState init_state(const RunConfig& cfg, const std::vector<ClientShard>& shards,
                      const std::optional<BlockState>& init) {
  const std::size_t M = shards.size();
  if (init) {
    require(init->C.M == M && init->C.K == cfg.K, "init membership shape mismatch");
    require(init->ens.K() == cfg.K, "init ensemble K mismatch");
    init->ens.validate();
    for (std::size_t i = 0; i < M; ++i) init->C.row_vec(i).validate(cfg.epsilon_floor);
    return *init;
  }
  BlockState z;
  const LabeledDataset& ref = shards.front().train;
  RngStream rng(rng_key(cfg.seed, 0, kServer, rng_tag::init_theta));
  z.ens = init_ensemble(ref.dim(), cfg.K, link_for_task(ref.task), ref.n_classes, rng);
  z.C = MembershipMatrix::uniform(M, cfg.K);
  return z;
}

std::size_t sample_index(const std::vector<double>& weights, double u) {
  double total = 0.0;
  for (double w : weights) total += w;
  require(total > 0.0, "output sampling weights must have positive mass");
  double cum = 0.0;
  for (std::size_t t = 0; t < weights.size(); ++t) {
    cum += weights[t] / total;
    if (u < cum) return t;
  }
  return weights.size() - 1;
}

std::vector<std::size_t> snapshot_set(const RunConfig& cfg) {
  std::vector<std::size_t> s = cfg.effective_snapshot_rounds();
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

RoundRecord measure_round(std::size_t t, int block, const BlockState& z,
                          const std::vector<ClientShard>& shards, const AffinityGraph& graph,
                          const RunConfig& cfg, const CriterionRecord& crit,
                          const CommLedger& ledger, int threads) {
  RoundRecord rec;
  rec.round = t;
  rec.block = block;
  rec.criterion = crit;
  rec.objective = objective_value(z.ens, z.C, shards, graph, cfg.lambda, cfg.architecture, threads);
  const EvalResult train = evaluate(z, shards, cfg.architecture, false, threads);
  const EvalResult test = evaluate(z, shards, cfg.architecture, true, threads);
  rec.train_weighted = train.weighted;
  rec.train_mean = train.mean;
  rec.test_weighted = test.weighted;
  rec.test_mean = test.mean;
  rec.cum_broadcast = ledger.broadcast;
  rec.cum_upload = ledger.upload;
  rec.cum_sync = ledger.sync;
  return rec;
}

std::vector<DenseMatrix> local_deltas(const BlockState& z, const std::vector<ClientShard>& shards,
                                      const RunConfig& cfg, double eta1, std::size_t round,
                                      const MembershipMatrix& C, int threads) {
  std::vector<DenseMatrix> deltas(shards.size());
  parallel_for(shards.size(), threads, [&](std::size_t i) {
    RngStream rng(rng_key(cfg.seed, round, i, rng_tag::theta_batch));
    deltas[i] = theta_local_steps(z.ens, C.row_vec(i), shards[i].train, cfg.architecture, cfg.E,
                                  eta1, cfg.batch, rng);
  });
  return deltas;
}

std::vector<double> client_weights(const std::vector<ClientShard>& shards) {
  std::vector<double> w(shards.size());
  for (std::size_t i = 0; i < shards.size(); ++i) w[i] = shards[i].weight;
  return w;
}

}  // namespace detail

RunTrajectory rbcd_run(const RunConfig& cfg, const std::vector<ClientShard>& shards,
                       const AffinityGraph& graph, const std::optional<BlockState>& init,
                       int threads) {
  const auto t0 = std::chrono::steady_clock::now();
  detail::check_inputs(cfg, shards, graph);
  const std::size_t M = shards.size();

  RunTrajectory traj;
  traj.config = cfg;
  traj.task = shards.front().train.task;

  BlockState z = detail::init_state(cfg, shards, init);
  traj.smoothness = estimate_smoothness(shards, cfg, graph, z.ens);
  traj.output_weights = output_sampling_weights(cfg, traj.smoothness);

  traj.ledger.canonical_floats = z.ens.theta.rows;
  traj.ledger.K = cfg.K;

  const std::vector<std::size_t> snaps = detail::snapshot_set(cfg);
  const std::vector<double> weights = detail::client_weights(shards);

  if (cfg.T > 0) {
    RngStream out_rng(rng_key(cfg.seed, 0, kServer, rng_tag::output_index));
    traj.output_index = detail::sample_index(traj.output_weights, out_rng.uniform());
  }
  traj.output_state = z;  // placeholder until round t' is reached

  for (std::size_t t = 0; t < cfg.T; ++t) {
    if (std::binary_search(snaps.begin(), snaps.end(), t)) traj.snapshots.emplace_back(t, z.C);
    const StepSizes st = StepSizes::from_eta(cfg.eta.at(t), cfg.E);
    const CriterionRecord crit = criterion(z.ens, z.C, shards, graph, cfg.lambda, st.eta2,
                                           cfg.epsilon_floor, cfg.architecture, threads);
    if (t == traj.output_index) traj.output_state = z;

    RngStream block_rng(rng_key(cfg.seed, t, kServer, rng_tag::block_choice));
    const int block = block_rng.uniform() < cfg.rho1 ? 1 : 2;
    if (block == 1) {
      const std::vector<DenseMatrix> deltas =
          detail::local_deltas(z, shards, cfg, st.eta1, t, z.C, threads);
      z.ens = theta_aggregate(z.ens, deltas, weights);
      traj.ledger.add_theta_round(M);
    } else {
      z.C = c_update(z.ens, z.C, shards, graph, cfg.lambda, st.eta2, cfg.epsilon_floor, cfg.batch,
                     cfg.architecture, RoundCtx{cfg.seed, t, threads});
      traj.ledger.add_c_round(M);
    }
    traj.rounds.push_back(
        detail::measure_round(t, block, z, shards, graph, cfg, crit, traj.ledger, threads));
  }
  if (std::binary_search(snaps.begin(), snaps.end(), cfg.T)) traj.snapshots.emplace_back(cfg.T, z.C);

  traj.final_state = z;
  traj.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return traj;
}

RunTrajectory alternating_run(const RunConfig& cfg, const std::vector<ClientShard>& shards,
                              const AffinityGraph& graph, const std::optional<BlockState>& init,
                              int threads) {
  const auto t0 = std::chrono::steady_clock::now();
  detail::check_inputs(cfg, shards, graph);
  const std::size_t M = shards.size();

  RunTrajectory traj;
  traj.config = cfg;
  traj.task = shards.front().train.task;

  BlockState z = detail::init_state(cfg, shards, init);
  traj.smoothness = estimate_smoothness(shards, cfg, graph, z.ens);
  const double f0 =
      objective_value(z.ens, z.C, shards, graph, cfg.lambda, cfg.architecture, threads);
  validate_alternating_steps(cfg, traj.smoothness, f0);
  traj.output_weights.assign(cfg.T, cfg.T > 0 ? 1.0 / static_cast<double>(cfg.T) : 0.0);

  traj.ledger.canonical_floats = z.ens.theta.rows;
  traj.ledger.K = cfg.K;

  const std::vector<std::size_t> snaps = detail::snapshot_set(cfg);
  const std::vector<double> weights = detail::client_weights(shards);

  if (cfg.T > 0) {
    RngStream out_rng(rng_key(cfg.seed, 0, kServer, rng_tag::output_index));
    traj.output_index = detail::sample_index(traj.output_weights, out_rng.uniform());
  }
  traj.output_state = z;

  for (std::size_t t = 0; t < cfg.T; ++t) {
    if (std::binary_search(snaps.begin(), snaps.end(), t)) traj.snapshots.emplace_back(t, z.C);
    const StepSizes st = StepSizes::from_eta(cfg.eta.at(t), cfg.E);
    const CriterionRecord crit = criterion(z.ens, z.C, shards, graph, cfg.lambda, st.eta2,
                                           cfg.epsilon_floor, cfg.architecture, threads);
    if (t == traj.output_index) traj.output_state = z;

    // Membership first (always full gradient), then theta conditioned on the
    // fresh memberships; one combined upload, no trailing sync.
    const MembershipMatrix Cnew =
        c_update(z.ens, z.C, shards, graph, cfg.lambda, st.eta2, cfg.epsilon_floor, BatchSpec{},
                 cfg.architecture, RoundCtx{cfg.seed, t, threads});
    const std::vector<DenseMatrix> deltas =
        detail::local_deltas(z, shards, cfg, st.eta1, t, Cnew, threads);
    z.C = Cnew;
    z.ens = theta_aggregate(z.ens, deltas, weights);
    traj.ledger.add_alternating_round(M);

    traj.rounds.push_back(
        detail::measure_round(t, 3, z, shards, graph, cfg, crit, traj.ledger, threads));
  }
  if (std::binary_search(snaps.begin(), snaps.end(), cfg.T)) traj.snapshots.emplace_back(cfg.T, z.C);

  traj.final_state = z;
  traj.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return traj;
}

}  // namespace ppfl
