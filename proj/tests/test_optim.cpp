#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "ppfl/core/rng.hpp"
#include "ppfl/graph/affinity.hpp"
#include "ppfl/optim/local_sgd.hpp"
#include "ppfl/optim/mirror.hpp"
#include "ppfl/optim/objective.hpp"
#include "ppfl/optim/smoothness.hpp"
#include "ppfl/optim/types.hpp"

#include "helpers.hpp"

using namespace ppfl;

namespace {

// Eq.-(15)-style mirror subproblem value at c on the K=2 simplex grid:
//   <G, c - c_t> + (KL(c || c_t) - sum(c - c_t)) / eta.
double subproblem_value(const std::vector<double>& G, const std::vector<double>& c,
                        const std::vector<double>& ct, double eta) {
  double lin = 0.0, breg = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    lin += G[k] * (c[k] - ct[k]);
    breg += c[k] * std::log(c[k] / ct[k]) - (c[k] - ct[k]);
  }
  return lin + breg / eta;
}

// Brute-force minimizer over {c1 = j*1e-4} of the K=2 subproblem.
std::vector<double> grid_minimizer(const std::vector<double>& G, const std::vector<double>& ct,
                                   double eta) {
  const double step = 1e-4;
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> arg = {0.5, 0.5};
  for (int j = 1; j < 10000; ++j) {
    const std::vector<double> c = {j * step, 1.0 - j * step};
    const double v = subproblem_value(G, c, ct, eta);
    if (v < best) {
      best = v;
      arg = c;
    }
  }
  return arg;
}

MembershipMatrix random_C(std::size_t M, std::size_t K, std::uint64_t key) {
  RngStream rng(key);
  MembershipMatrix C(M, K);
  for (std::size_t i = 0; i < M; ++i) {
    auto row = rng.dirichlet(1.0, K);
    for (std::size_t k = 0; k < K; ++k) C.row(i)[k] = row[k];
  }
  return C;
}

}  // namespace

TEST_CASE("exp_grad_step closed form and invariances") {
  MembershipVector c;
  c.c = {0.5, 0.5};
  const double eta = 1.0;

  // hand-computed: u = c .* exp(-eta g), normalized
  const std::vector<double> g = {1.0, 0.0};
  const auto out = exp_grad_step(c, g, eta, 1e-6);
  const double e = std::exp(-1.0);
  CHECK(out.c[0] == doctest::Approx(e / (1.0 + e)).epsilon(1e-12));
  CHECK(out.c[1] == doctest::Approx(1.0 / (1.0 + e)).epsilon(1e-12));

  // zero gradient: fixed point
  const auto same = exp_grad_step(c, {0.0, 0.0}, eta, 1e-6);
  CHECK(same.c[0] == doctest::Approx(0.5).epsilon(1e-14));

  // adding a constant to g only rescales the normalizer
  const std::vector<double> shifted = {1.0 + 7.5, 0.0 + 7.5};
  const auto out2 = exp_grad_step(c, shifted, eta, 1e-6);
  CHECK(out2.c[0] == doctest::Approx(out.c[0]).epsilon(1e-12));

  CHECK_THROWS_AS(exp_grad_step(c, {1.0}, eta, 1e-6), Error);       // length mismatch
  CHECK_THROWS_AS(exp_grad_step(c, g, 0.0, 1e-6), Error);           // eta must be positive
  CHECK_THROWS_AS(exp_grad_step(c, {1.0, std::nan("")}, eta, 1e-6), Error);
}

TEST_CASE("mirror steps respect the simplex and the floor") {
  RngStream rng(71);
  for (int rep = 0; rep < 2000; ++rep) {
    const std::size_t K = 2 + rng.uniform_int(5);
    MembershipVector c;
    c.c = rng.dirichlet(0.3, K);  // spiky inputs stress the floor
    for (double& v : c.c) v = std::max(v, 1e-6);
    double s = 0.0;
    for (double v : c.c) s += v;
    for (double& v : c.c) v /= s;

    std::vector<double> g(K);
    for (double& v : g) v = rng.uniform(-40.0, 40.0);
    const double eta = std::exp(rng.uniform(std::log(1e-3), std::log(5.0)));

    const auto out = exp_grad_step(c, g, eta, 1e-6);
    double sum = 0.0;
    for (double v : out.c) {
      CHECK(v >= 1e-6);
      sum += v;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-9);
  }
}

TEST_CASE("mirror step matches the grid-search subproblem minimizer") {
  RngStream rng(72);
  for (int rep = 0; rep < 40; ++rep) {
    MembershipVector ct;
    ct.c = rng.dirichlet(1.0, 2);
    for (double& v : ct.c) v = std::max(v, 1e-3);
    const double s = ct.c[0] + ct.c[1];
    for (double& v : ct.c) v /= s;

    std::vector<double> G = {rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)};
    const double eta = rng.uniform(0.1, 2.0);

    const auto got = exp_grad_step(ct, G, eta, 1e-6);
    const auto want = grid_minimizer(G, ct.c, eta);
    CHECK(std::abs(got.c[0] - want[0]) <= 2e-4);
    CHECK(std::abs(got.c[1] - want[1]) <= 2e-4);
  }
}

TEST_CASE("c_update composes weighted gradients with the Laplacian pull") {
  const std::size_t M = 3, K = 2, d = 4;
  auto shards = testutil::make_shards(M, 10, d, Task::regression, 0, 300);
  RngStream rng(73);
  auto ens = init_ensemble(d, K, Link::identity, 0, rng);
  const MembershipMatrix C = random_C(M, K, 74);
  const AffinityGraph g = AffinityGraph::all_ones(M);
  const double lambda = 0.3, eta2 = 0.2;

  RoundCtx ctx;
  ctx.seed = 9;
  ctx.round = 4;
  const MembershipMatrix got =
      c_update(ens, C, shards, g, lambda, eta2, 1e-6, BatchSpec{}, Architecture::prediction_mixture, ctx);

  const MembershipMatrix LC = laplacian_apply(g, C);
  for (std::size_t i = 0; i < M; ++i) {
    auto ci = C.row_vec(i);
    std::vector<double> G = grad_c(ens, ci, shards[i].train, Architecture::prediction_mixture);
    for (std::size_t k = 0; k < K; ++k)
      G[k] = shards[i].weight * G[k] + 2.0 * lambda * LC.row(i)[k];
    const auto want = exp_grad_step(ci, G, eta2, 1e-6);
    for (std::size_t k = 0; k < K; ++k)
      CHECK(got.row(i)[k] == doctest::Approx(want.c[k]).epsilon(1e-14));
  }
}

TEST_CASE("c_update minibatches are seeded per client and round") {
  const std::size_t M = 2, K = 2, d = 3;
  auto shards = testutil::make_shards(M, 30, d, Task::regression, 0, 301);
  RngStream rng(75);
  auto ens = init_ensemble(d, K, Link::identity, 0, rng);
  const MembershipMatrix C = MembershipMatrix::uniform(M, K);
  const AffinityGraph g = AffinityGraph::all_ones(M);
  BatchSpec batch;
  batch.full = false;
  batch.size = 5;

  RoundCtx ctx;
  ctx.seed = 11;
  ctx.round = 2;
  const auto a = c_update(ens, C, shards, g, 0.1, 0.2, 1e-6, batch, Architecture::prediction_mixture, ctx);
  const auto b = c_update(ens, C, shards, g, 0.1, 0.2, 1e-6, batch, Architecture::prediction_mixture, ctx);
  CHECK(a == b);  // same round, same draw

  ctx.round = 3;
  const auto c = c_update(ens, C, shards, g, 0.1, 0.2, 1e-6, batch, Architecture::prediction_mixture, ctx);
  CHECK_FALSE(a == c);  // new round, new batch
}

TEST_CASE("criterion assembles gradient norm and prox distance") {
  const std::size_t M = 4, K = 3, d = 5;
  auto shards = testutil::make_shards(M, 12, d, Task::regression, 0, 302);
  RngStream rng(76);
  auto ens = init_ensemble(d, K, Link::identity, 0, rng);
  const MembershipMatrix C = random_C(M, K, 77);
  const AffinityGraph g = AffinityGraph::all_ones(M);
  const double lambda = 0.2, eta = 0.15;

  const CriterionRecord rec =
      criterion(ens, C, shards, g, lambda, eta, 1e-6, Architecture::prediction_mixture);

  DenseMatrix sum(ens.param_dim(), K);
  for (std::size_t i = 0; i < M; ++i) {
    auto ci = C.row_vec(i);
    sum.add_scaled(grad_theta(ens, ci, shards[i].train, Architecture::prediction_mixture),
                   shards[i].weight);
  }
  CHECK(rec.grad_theta_norm_sq == doctest::Approx(sum.frob_norm_sq()).epsilon(1e-12));

  RoundCtx ctx;
  const MembershipMatrix Cplus =
      c_update(ens, C, shards, g, lambda, eta, 1e-6, BatchSpec{}, Architecture::prediction_mixture, ctx);
  double l1 = 0.0;
  for (std::size_t i = 0; i < C.data.size(); ++i) l1 += std::abs(C.data[i] - Cplus.data[i]);
  CHECK(rec.prox_c_norm1_sq == doctest::Approx(l1 * l1 / (eta * eta)).epsilon(1e-12));
  CHECK(rec.composite == doctest::Approx(rec.grad_theta_norm_sq + rec.prox_c_norm1_sq));
}

TEST_CASE("one full-batch local step is exact gradient descent") {
  const std::size_t d = 4, K = 2;
  auto shards = testutil::make_shards(1, 15, d, Task::regression, 0, 303);
  RngStream rng(78);
  auto ens = init_ensemble(d, K, Link::identity, 0, rng);
  const auto c = testutil::random_membership(K, rng);
  const double eta1 = 0.07;

  RngStream step_rng(1234);
  const DenseMatrix delta =
      theta_local_steps(ens, c, shards[0].train, Architecture::prediction_mixture, 1, eta1,
                        BatchSpec{}, step_rng);
  const DenseMatrix g = grad_theta(ens, c, shards[0].train, Architecture::prediction_mixture);
  for (std::size_t i = 0; i < delta.size(); ++i)
    CHECK(std::abs(delta.data[i] + eta1 * g.data[i]) <= 1e-12);
}

TEST_CASE("E full-batch local steps compose E exact GD steps") {
  const std::size_t d = 3, K = 2, E = 4;
  auto shards = testutil::make_shards(1, 9, d, Task::regression, 0, 304);
  RngStream rng(79);
  auto ens = init_ensemble(d, K, Link::identity, 0, rng);
  const auto c = testutil::random_membership(K, rng);
  const double eta1 = 0.05;

  RngStream step_rng(99);
  const DenseMatrix delta = theta_local_steps(ens, c, shards[0].train,
                                              Architecture::prediction_mixture, E, eta1,
                                              BatchSpec{}, step_rng);
  CanonicalEnsemble walk = ens;
  for (std::size_t e = 0; e < E; ++e) {
    const DenseMatrix g = grad_theta(walk, c, shards[0].train, Architecture::prediction_mixture);
    walk.theta.add_scaled(g, -eta1);
  }
  for (std::size_t i = 0; i < delta.size(); ++i)
    CHECK(delta.data[i] == doctest::Approx(walk.theta.data[i] - ens.theta.data[i]).epsilon(1e-14));
}

TEST_CASE("theta_aggregate applies the exact weighted-delta formula") {
  RngStream rng(80);
  auto ens = init_ensemble(3, 2, Link::identity, 0, rng);
  ens.theta(0, 0) = 0.25;  // power-of-two so the +/-0.5 adds cancel exactly
  std::vector<DenseMatrix> deltas(2, DenseMatrix(3, 2));
  deltas[0](0, 0) = 1.0;
  deltas[1](0, 0) = -1.0;

  // equal weights, opposite deltas: theta unchanged
  auto out = theta_aggregate(ens, deltas, {0.5, 0.5});
  CHECK(out.theta == ens.theta);

  // single client with full weight: theta + delta, bit for bit
  auto solo = theta_aggregate(ens, {deltas[0]}, {1.0});
  DenseMatrix want = ens.theta;
  want.add_scaled(deltas[0], 1.0);
  CHECK(solo.theta == want);

  CHECK_THROWS_AS(theta_aggregate(ens, deltas, {0.5, 0.4}), Error);  // sum != 1
}

TEST_CASE("step size derivation follows the schedule constants") {
  const StepSizes st = StepSizes::from_eta(0.2, 4);
  CHECK(st.eta == 0.2);
  CHECK(st.eta1 == doctest::Approx(0.05));
  CHECK(st.eta2 == 0.2);
  CHECK(st.gamma1 == doctest::Approx(0.8));
  CHECK(st.gamma2 == doctest::Approx(0.1));
}

TEST_CASE("power iteration agrees with a dense eigensolver") {
  for (std::uint64_t key : {81u, 82u, 83u}) {
    RngStream rng(key);
    const std::size_t n = 5;
    // PSD Gram matrix A = B' B
    Eigen::MatrixXd B(n + 2, n);
    for (int i = 0; i < B.rows(); ++i)
      for (int j = 0; j < B.cols(); ++j) B(i, j) = rng.normal();
    Eigen::MatrixXd A = B.transpose() * B;
    DenseMatrix M(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) M(i, j) = A(i, j);
    const double want = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(A).eigenvalues()(n - 1);
    CHECK(power_iteration_top_eig(M) == doctest::Approx(want).epsilon(1e-8));
  }
}

TEST_CASE("smoothness estimates against direct eigensolves") {
  const std::size_t M = 3, d = 4, K = 2;
  auto shards = testutil::make_shards(M, 10, d, Task::regression, 0, 305);
  const AffinityGraph graph = AffinityGraph::all_ones(M);
  RunConfig cfg;
  cfg.K = K;
  cfg.lambda = 0.25;
  cfg.seed = 17;

  const SmoothnessEstimates sm = estimate_smoothness(shards, cfg, graph);
  CHECK(sm.source == SmoothnessSource::power_iteration);

  // L1 = max_i lambda_max(Xi' Xi / n_i), identity-link curvature 1
  double l1 = 0.0;
  for (const auto& s : shards) {
    const std::size_t n = s.train.n();
    Eigen::MatrixXd X(n, d);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < d; ++j) X(i, j) = s.train.X(i, j);
    Eigen::MatrixXd G = X.transpose() * X / double(n);
    l1 = std::max(l1, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(G).eigenvalues()(d - 1));
  }
  CHECK(sm.L1 == doctest::Approx(l1).epsilon(1e-8));

  // L2 = max_i (p_i L_c,i + 2 lambda d_ii); with the seeded init the
  // predictor Gram is tiny, so the degree term dominates but both enter.
  RngStream rng(rng_key(cfg.seed, 0, kServer, rng_tag::init_theta));
  const auto init =
      init_ensemble(d, K, Link::identity, 0, rng);
  double l2 = 0.0;
  for (std::size_t i = 0; i < M; ++i) {
    const auto& tr = shards[i].train;
    Eigen::MatrixXd V(tr.n(), K);
    for (std::size_t l = 0; l < tr.n(); ++l)
      for (std::size_t k = 0; k < K; ++k) {
        double z = 0.0;
        for (std::size_t p = 0; p < d; ++p) z += tr.X(l, p) * init.theta(p, k);
        V(l, k) = z;
      }
    Eigen::MatrixXd G = V.transpose() * V / double(tr.n());
    const double lc = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(G).eigenvalues()(K - 1);
    l2 = std::max(l2, shards[i].weight * lc + 2.0 * cfg.lambda * graph.degree[i]);
  }
  CHECK(sm.L2 == doctest::Approx(l2).epsilon(1e-8));
}

TEST_CASE("smoothness overrides switch the source to user") {
  auto shards = testutil::make_shards(2, 8, 3, Task::regression, 0, 306);
  const AffinityGraph graph = AffinityGraph::all_ones(2);
  RunConfig cfg;
  cfg.smoothness.L1 = 2.0;
  cfg.smoothness.L2 = 3.0;
  const auto sm = estimate_smoothness(shards, cfg, graph);
  CHECK(sm.L1 == 2.0);
  CHECK(sm.L2 == 3.0);
  CHECK(sm.source == SmoothnessSource::user);

  // loss_mixture kills the membership curvature term: L2 = max 2 lambda d_ii
  RunConfig lm;
  lm.architecture = Architecture::loss_mixture;
  lm.lambda = 0.5;
  const auto sm2 = estimate_smoothness(shards, lm, graph);
  CHECK(sm2.L2 == doctest::Approx(2.0 * 0.5 * 2.0));
}

TEST_CASE("step bounds and output weights") {
  SmoothnessEstimates sm;
  sm.L1 = 2.0;
  sm.L2 = 5.0;
  CHECK(rbcd_eta_bound(1, sm) == doctest::Approx(std::min(1.0 / 64.0, 0.4)));
  CHECK(rbcd_eta_bound(4, sm) == doctest::Approx(1.0 / (32.0 * 4 * 2.0)));

  RunConfig cfg;
  cfg.T = 3;
  cfg.E = 1;
  cfg.rho1 = cfg.rho2 = 0.5;
  cfg.eta.value = 0.01;
  const auto w = output_sampling_weights(cfg, sm);
  REQUIRE(w.size() == 3);
  // eta * min(rho1 (1 - 4 eta L1), rho2 (1 - eta/2 L2))
  const double want = 0.01 * std::min(0.5 * (1 - 0.04 * 2.0), 0.5 * (1 - 0.005 * 5.0));
  for (double v : w) CHECK(v == doctest::Approx(want).epsilon(1e-14));

  cfg.eta.value = 10.0;  // 1 - 4*10*2 < 0: weight goes nonpositive
  CHECK_THROWS_WITH_AS(output_sampling_weights(cfg, sm),
                       doctest::Contains("step size violates Theorem 2 bound"), Error);

  // blocks with rho = 0 are excluded from the min
  cfg.eta.value = 0.3;
  cfg.rho1 = 0.0;
  cfg.rho2 = 1.0;
  const auto w2 = output_sampling_weights(cfg, sm);  // theta block would fail, c block passes
  CHECK(w2[0] == doctest::Approx(0.3 * (1.0 - 0.15 * 5.0)));
}

TEST_CASE("alternating bound includes the variance terms when supplied") {
  SmoothnessEstimates sm;
  sm.L1 = 2.0;
  sm.L2 = 0.5;
  CHECK(alternating_eta_bound(sm, 100, 1.0) == doctest::Approx(1.0 / 32.0));

  sm.sigma1_sq = 4.0;
  const double v1 = std::sqrt(4.0 * 1.0 / (4.0 * 2.0 * 4.0 * 100.0));
  CHECK(alternating_eta_bound(sm, 100, 1.0) == doctest::Approx(std::min(1.0 / 32.0, v1)));

  sm.delta_sq = 9.0;
  const double v2 = std::cbrt(4.0 * 1.0 / (128.0 * 4.0 * 9.0 * 100.0));
  CHECK(alternating_eta_bound(sm, 100, 1.0) ==
        doctest::Approx(std::min({1.0 / 32.0, v1, v2})));
}

TEST_CASE("objective assembles weighted loss plus the Laplacian penalty") {
  const std::size_t M = 3, K = 2, d = 4;
  auto shards = testutil::make_shards(M, 11, d, Task::regression, 0, 307);
  RngStream rng(84);
  auto ens = init_ensemble(d, K, Link::identity, 0, rng);
  const MembershipMatrix C = random_C(M, K, 85);
  const AffinityGraph g = AffinityGraph::all_ones(M);
  const double lambda = 0.4;

  double loss = 0.0;
  for (std::size_t i = 0; i < M; ++i)
    loss += shards[i].weight *
            local_loss(ens, C.row_vec(i), shards[i].train, Architecture::prediction_mixture);
  CHECK(weighted_loss(ens, C, shards, Architecture::prediction_mixture) ==
        doctest::Approx(loss).epsilon(1e-12));
  CHECK(objective_value(ens, C, shards, g, lambda, Architecture::prediction_mixture) ==
        doctest::Approx(loss + lambda * laplacian_quadratic(g, C)).epsilon(1e-12));
}

TEST_CASE("surrogate majorizes the objective and touches it at the anchor") {
  const std::size_t M = 5, K = 3, d = 3;
  auto shards = testutil::make_shards(M, 8, d, Task::regression, 0, 308);
  RngStream rng(86);
  auto ens = init_ensemble(d, K, Link::identity, 0, rng);
  const double lambda = 0.7;

  std::vector<std::vector<double>> hists;
  for (std::size_t i = 0; i < M; ++i) {
    std::vector<double> h(4);
    for (double& v : h) v = rng.uniform();
    hists.push_back(h);
  }
  const AffinityGraph graphs[] = {AffinityGraph::all_ones(M), AffinityGraph::cosine_gram(hists)};

  for (const AffinityGraph& g : graphs) {
    REQUIRE(g.psd);
    for (int rep = 0; rep < 100; ++rep) {
      const MembershipMatrix anchor = random_C(M, K, 900 + rep);
      const MembershipMatrix C = random_C(M, K, 5000 + rep);
      const double F = objective_value(ens, C, shards, g, lambda, Architecture::prediction_mixture);
      const double S =
          surrogate_value(ens, C, anchor, shards, g, lambda, Architecture::prediction_mixture);
      CHECK(S >= F - 1e-10);
      const double F_anchor =
          objective_value(ens, anchor, shards, g, lambda, Architecture::prediction_mixture);
      const double S_anchor =
          surrogate_value(ens, anchor, anchor, shards, g, lambda, Architecture::prediction_mixture);
      CHECK(std::abs(S_anchor - F_anchor) <= 1e-10);
    }
  }
}
