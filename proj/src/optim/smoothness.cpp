#include "ppfl/optim/smoothness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "ppfl/core/error.hpp"
#include "ppfl/core/rng.hpp"

namespace ppfl {

double power_iteration_top_eig(const DenseMatrix& sym) {
  require(sym.rows == sym.cols, "power_iteration_top_eig: matrix must be square");
  const std::size_t n = sym.rows;
  if (n == 0) return 0.0;

  std::vector<double> v(n), w(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 1e-3 * static_cast<double>(i % 7);
  double nv = 0.0;
  for (double x : v) nv += x * x;
  nv = std::sqrt(nv);
  for (double& x : v) x /= nv;

  double lam = 0.0;
  for (int it = 0; it < 500; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      const double* row = sym.row_ptr(i);
      for (std::size_t j = 0; j < n; ++j) s += row[j] * v[j];
      w[i] = s;
    }
    double nw = 0.0;
    for (double x : w) nw += x * x;
    nw = std::sqrt(nw);
    if (nw < 1e-300) return 0.0;  // operator annihilates the start vector
    if (it > 5 && std::abs(nw - lam) <= 1e-12 * std::max(1.0, nw)) {
      lam = nw;
      break;
    }
    lam = nw;
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / nw;
  }
  return lam;
}

namespace {

double curvature_for(Link link) {
  switch (link) {
    case Link::identity: return 1.0;
    case Link::logit: return 0.25;
    case Link::softmax: return 0.5;
  }
  return 1.0;
}

// lambda_max(X'X/n) for one client's train split.
double feature_gram_top_eig(const LabeledDataset& ds) {
  const std::size_t n = ds.n(), d = ds.dim();
  DenseMatrix gram(d, d);
  for (std::size_t l = 0; l < n; ++l) {
    const double* x = ds.X.row_ptr(l);
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b) gram(a, b) += x[a] * x[b];
  }
  const double inv = 1.0 / static_cast<double>(n);
  for (double& v : gram.data) v *= inv;
  return power_iteration_top_eig(gram);
}

// lambda_max(V'V/n) where row l of V holds the per-canonical linear
// predictors of sample l (all class blocks stacked for softmax). This is the
// K x K Gram of the membership Jacobian.
double predictor_gram_top_eig(const CanonicalEnsemble& ens, const LabeledDataset& ds) {
  const std::size_t n = ds.n(), d = ds.dim(), K = ens.K();
  const std::size_t C = ens.link == Link::softmax ? static_cast<std::size_t>(ens.n_classes) : 1;
  DenseMatrix gram(K, K);
  std::vector<double> z(K * C);
  for (std::size_t l = 0; l < n; ++l) {
    const double* x = ds.X.row_ptr(l);
    std::fill(z.begin(), z.end(), 0.0);
    for (std::size_t c = 0; c < C; ++c)
      for (std::size_t p = 0; p < d; ++p) {
        const double xp = x[p];
        const double* row = ens.theta.row_ptr(c * d + p);
        for (std::size_t k = 0; k < K; ++k) z[k * C + c] += xp * row[k];
      }
    for (std::size_t c = 0; c < C; ++c)
      for (std::size_t a = 0; a < K; ++a)
        for (std::size_t b = 0; b < K; ++b) gram(a, b) += z[a * C + c] * z[b * C + c];
  }
  const double inv = 1.0 / static_cast<double>(n);
  for (double& v : gram.data) v *= inv;
  return power_iteration_top_eig(gram);
}

}  // namespace

SmoothnessEstimates estimate_smoothness(const std::vector<ClientShard>& shards,
                                        const RunConfig& config, const AffinityGraph& graph) {
  const Link link = link_for_task(shards.front().train.task);
  RngStream rng(rng_key(config.seed, 0, kServer, rng_tag::init_theta));
  CanonicalEnsemble init = init_ensemble(shards.front().train.dim(), config.K, link,
                                         shards.front().train.n_classes, rng);
  return estimate_smoothness(shards, config, graph, init);
}

SmoothnessEstimates estimate_smoothness(const std::vector<ClientShard>& shards,
                                        const RunConfig& config, const AffinityGraph& graph,
                                        const CanonicalEnsemble& init) {
  require(!shards.empty(), "estimate_smoothness: no shards");
  SmoothnessEstimates out;
  out.sigma1_sq = config.smoothness.sigma1_sq;
  out.sigma2_sq = config.smoothness.sigma2_sq;
  out.delta_sq = config.smoothness.delta_sq;

  const bool user = config.smoothness.L1.has_value() && config.smoothness.L2.has_value();
  if (user) {
    out.L1 = *config.smoothness.L1;
    out.L2 = *config.smoothness.L2;
    out.source = SmoothnessSource::user;
    return out;
  }

  const double curv = curvature_for(init.link);
  double l1 = 0.0, l2 = 0.0;
  for (std::size_t i = 0; i < shards.size(); ++i) {
    l1 = std::max(l1, curv * feature_gram_top_eig(shards[i].train));
    double lc = 0.0;
    if (config.architecture != Architecture::loss_mixture)
      lc = curv * predictor_gram_top_eig(init, shards[i].train);
    l2 = std::max(l2, shards[i].weight * lc + 2.0 * config.lambda * graph.degree[i]);
  }
  out.L1 = config.smoothness.L1.value_or(l1);
  out.L2 = config.smoothness.L2.value_or(l2);
  out.source = (config.smoothness.L1 || config.smoothness.L2) ? SmoothnessSource::user
                                                              : SmoothnessSource::power_iteration;
  return out;
}

double rbcd_eta_bound(std::size_t E, const SmoothnessEstimates& sm) {
  double b = std::numeric_limits<double>::infinity();
  if (sm.L1 > 0.0) b = std::min(b, 1.0 / (32.0 * static_cast<double>(E) * sm.L1));
  if (sm.L2 > 0.0) b = std::min(b, 2.0 / sm.L2);
  return b;
}

double alternating_eta_bound(const SmoothnessEstimates& sm, std::size_t T, double delta_F) {
  double b = std::numeric_limits<double>::infinity();
  if (sm.L1 > 0.0) b = std::min(b, 1.0 / (16.0 * sm.L1));
  if (sm.L2 > 0.0) b = std::min(b, 1.0 / sm.L2);
  if (sm.sigma1_sq && sm.L1 > 0.0 && T > 0) {
    const double s11 = 4.0 * sm.L1 * *sm.sigma1_sq;
    if (s11 > 0.0) b = std::min(b, std::sqrt(4.0 * delta_F / (s11 * static_cast<double>(T))));
  }
  if (sm.delta_sq && sm.L1 > 0.0 && T > 0) {
    const double s12 = 128.0 * sm.L1 * sm.L1 * *sm.delta_sq;
    if (s12 > 0.0) b = std::min(b, std::cbrt(4.0 * delta_F / (s12 * static_cast<double>(T))));
  }
  return b;
}

std::vector<double> output_sampling_weights(const RunConfig& cfg, const SmoothnessEstimates& sm) {
  std::vector<double> w(cfg.T, 0.0);
  for (std::size_t t = 0; t < cfg.T; ++t) {
    const StepSizes st = StepSizes::from_eta(cfg.eta.at(t), cfg.E);
    double m = std::numeric_limits<double>::infinity();
    if (cfg.rho1 > 0.0) m = std::min(m, cfg.rho1 * (1.0 - st.gamma1 * sm.L1));
    if (cfg.rho2 > 0.0) m = std::min(m, cfg.rho2 * (1.0 - st.gamma2 * sm.L2));
    w[t] = st.eta * m;
    if (!(w[t] > 0.0)) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "step size violates Theorem 2 bound: eta_%zu = %.6g exceeds "
                    "min{1/(32*E*L1), 2/L2} = %.6g",
                    t, st.eta, rbcd_eta_bound(cfg.E, sm));
      throw Error(ErrCode::step_bound, buf);
    }
  }
  return w;
}

void validate_alternating_steps(const RunConfig& cfg, const SmoothnessEstimates& sm,
                                double delta_F) {
  const double bound = alternating_eta_bound(sm, cfg.T, delta_F);
  for (std::size_t t = 0; t < cfg.T; ++t) {
    const double eta = cfg.eta.at(t);
    if (!(eta <= bound) || !(eta > 0.0)) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "step size violates Theorem 2 bound: eta_%zu = %.6g exceeds the "
                    "alternating-variant ceiling %.6g",
                    t, eta, bound);
      throw Error(ErrCode::step_bound, buf);
    }
  }
}

}  // namespace ppfl
