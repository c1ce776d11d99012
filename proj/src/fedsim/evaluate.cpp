#include "ppfl/fedsim/evaluate.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "ppfl/core/error.hpp"
#include "ppfl/core/parallel.hpp"

namespace ppfl {

namespace {

double score_split(const CanonicalEnsemble& ens, const MembershipVector& c,
                   const LabeledDataset& ds, Architecture arch) {
  const std::size_t n = ds.n();
  double acc = 0.0;
  std::vector<double> probs;
  for (std::size_t l = 0; l < n; ++l) {
    const double* x = ds.X.row_ptr(l);
    switch (ds.task) {
      case Task::regression: {
        const double r = predict_value(ens, c, x, arch) - ds.y[l];
        acc += r * r;
        break;
      }
      case Task::binary: {
        const int pred = predict_value(ens, c, x, arch) >= 0.5 ? 1 : 0;
        acc += pred == static_cast<int>(ds.y[l]) ? 1.0 : 0.0;
        break;
      }
      case Task::multiclass: {
        predict_probs(ens, c, x, arch, probs);
        std::size_t best = 0;
        for (std::size_t j = 1; j < probs.size(); ++j)
          if (probs[j] > probs[best]) best = j;
        acc += best == static_cast<std::size_t>(ds.y[l]) ? 1.0 : 0.0;
        break;
      }
    }
  }
  return acc / static_cast<double>(n);
}

}  // namespace

EvalResult evaluate(const BlockState& state, const std::vector<ClientShard>& shards,
                    Architecture arch, bool use_test, int threads) {
  const std::size_t M = shards.size();
  require(state.C.M == M, "evaluate: membership rows must match client count");

  EvalResult out;
  out.per_client.assign(M, std::numeric_limits<double>::quiet_NaN());
  out.included.assign(M, false);
  parallel_for(M, threads, [&](std::size_t i) {
    const LabeledDataset& ds = use_test ? shards[i].test : shards[i].train;
    if (ds.n() == 0) return;
    out.per_client[i] = score_split(state.ens, state.C.row_vec(i), ds, arch);
    out.included[i] = true;
  });

  double wsum = 0.0, wacc = 0.0, acc = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < M; ++i) {
    if (!out.included[i]) {
      std::fprintf(stderr, "warning: client %zu has an empty %s split; excluded from metrics\n",
                   i, use_test ? "test" : "train");
      continue;
    }
    wsum += shards[i].weight;
    wacc += shards[i].weight * out.per_client[i];
    acc += out.per_client[i];
    ++count;
  }
  require(count > 0, "evaluate: every client split is empty");
  out.weighted = wacc / wsum;
  out.mean = acc / static_cast<double>(count);
  return out;
}

}  // namespace ppfl
