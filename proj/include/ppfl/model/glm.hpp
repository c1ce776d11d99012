#pragma once
#include <span>
#include <vector>

#include "ppfl/core/config.hpp"
#include "ppfl/core/dataset.hpp"
#include "ppfl/core/matrix.hpp"
#include "ppfl/core/rng.hpp"
#include "ppfl/model/membership.hpp"

namespace ppfl {

enum class Link { identity, logit, softmax };

Link link_for_task(Task t);

// The K shared canonical GLM coefficient vectors, stacked column-wise.
// For the softmax link each column holds n_classes per-class coefficient
// blocks of length feature_dim (param_dim = feature_dim * n_classes).
struct CanonicalEnsemble {
  DenseMatrix theta;  // param_dim x K
  Link link = Link::identity;
  std::size_t feature_dim = 0;
  int n_classes = 0;  // softmax only

  std::size_t K() const { return theta.cols; }
  std::size_t param_dim() const { return theta.rows; }
  void validate() const;
};

// theta entries i.i.d. uniform in [-0.05, 0.05]: small symmetric init that
// keeps the logit link far from saturation.
CanonicalEnsemble init_ensemble(std::size_t feature_dim, std::size_t K, Link link,
                                int n_classes, RngStream& rng);

// Batch = subset of shard rows; an empty view means the full shard.
using IndexView = std::span<const std::size_t>;

// Scalar prediction for identity (yhat) and logit (P(y=1)).
double predict_value(const CanonicalEnsemble& ens, const MembershipVector& c,
                     const double* x, Architecture arch);
// Class-probability vector for softmax.
void predict_probs(const CanonicalEnsemble& ens, const MembershipVector& c, const double* x,
                   Architecture arch, std::vector<double>& out);

double local_loss(const CanonicalEnsemble& ens, const MembershipVector& c,
                  const LabeledDataset& shard, Architecture arch, IndexView idx = {});
DenseMatrix grad_theta(const CanonicalEnsemble& ens, const MembershipVector& c,
                       const LabeledDataset& shard, Architecture arch, IndexView idx = {});
std::vector<double> grad_c(const CanonicalEnsemble& ens, const MembershipVector& c,
                           const LabeledDataset& shard, Architecture arch, IndexView idx = {});

}  // namespace ppfl
