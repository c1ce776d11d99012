#include "ppfl/optim/local_sgd.hpp"

#include <cmath>

#include "ppfl/core/error.hpp"

namespace ppfl {

DenseMatrix theta_local_steps(const CanonicalEnsemble& ens, const MembershipVector& c_i,
                              const LabeledDataset& train, Architecture arch, std::size_t E,
                              double eta1, const BatchSpec& batch, RngStream& rng) {
  require(E >= 1, "theta_local_steps: E must be >= 1");
  require(eta1 > 0.0 && std::isfinite(eta1), "theta_local_steps: eta1 must be positive");

  CanonicalEnsemble work = ens;
  std::vector<std::size_t> idx;
  for (std::size_t step = 0; step < E; ++step) {
    IndexView view{};
    if (!batch.full) {
      idx.resize(batch.size);
      for (auto& v : idx) v = static_cast<std::size_t>(rng.uniform_int(train.n()));
      view = idx;
    }
    DenseMatrix g = grad_theta(work, c_i, train, arch, view);
    work.theta.add_scaled(g, -eta1);
  }
  DenseMatrix delta = work.theta;
  delta.add_scaled(ens.theta, -1.0);
  return delta;
}

CanonicalEnsemble theta_aggregate(const CanonicalEnsemble& ens,
                                  const std::vector<DenseMatrix>& deltas,
                                  const std::vector<double>& weights) {
  require(deltas.size() == weights.size(), "theta_aggregate: deltas/weights size mismatch");
  double wsum = 0.0;
  for (double w : weights) wsum += w;
  require(std::abs(wsum - 1.0) <= 1e-9, "theta_aggregate: weights must sum to 1");

  CanonicalEnsemble out = ens;
  for (std::size_t i = 0; i < deltas.size(); ++i) out.theta.add_scaled(deltas[i], weights[i]);
  require(out.theta.all_finite(), "theta_aggregate: non-finite parameters");
  return out;
}

}  // namespace ppfl
