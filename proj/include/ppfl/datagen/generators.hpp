#pragma once
#include <cstdint>
#include <utility>
#include <vector>

#include "ppfl/fedsim/shard.hpp"
#include "ppfl/model/membership.hpp"

namespace ppfl {

// Mixture-of-sources benchmark: K_true source GLMs, every client draws each
// sample from source k with its own Dirichlet mixture weight alpha_i[k].
struct MixtureSpec {
  std::size_t M = 30;
  std::size_t K_true = 3;
  std::size_t d = 20;
  std::size_t n_min = 50, n_max = 200;  // per-client sample count range
  double dirichlet_alpha = 1.0;
  Task task = Task::regression;
  double noise_std = 0.1;  // regression label noise
  double train_frac = 0.8;
};

struct MixtureGroundTruth {
  DenseMatrix theta_true;  // d x K_true, entries uniform in [-1, 1]
  MembershipMatrix alpha;  // M x K_true ground-truth mixture weights
  std::vector<std::vector<std::size_t>> source_counts;  // per client, per source
};

std::pair<std::vector<ClientShard>, MixtureGroundTruth> gen_mixture_synthetic(
    const MixtureSpec& spec, std::uint64_t seed);

// Group-structured classification: all groups share the same Gaussian feature
// clusters but label them with disjoint group-specific class ids, so no
// single global model can fit two groups at once while one canonical model
// per group can.
struct DomainSpec {
  std::size_t M = 30;
  std::size_t groups = 3;
  std::size_t classes_per_group = 2;
  std::size_t d = 20;
  std::size_t n_per_client = 120;
  double separation = 3.0;  // cluster mean = separation * unit direction
  double train_frac = 0.8;
};

std::pair<std::vector<ClientShard>, std::vector<std::size_t>> gen_domain_heterogeneous(
    const DomainSpec& spec, std::uint64_t seed);

// Label-skew partition of a pooled dataset: per class, client proportions are
// Dirichlet(alpha); empty clients trigger a full redraw (at most 100).
std::vector<ClientShard> gen_dirichlet_partition(const LabeledDataset& base, std::size_t M,
                                                 double alpha, std::uint64_t seed,
                                                 double train_frac = 0.8);

// Pooled multiclass base for the Dirichlet partition: one Gaussian cluster
// per class with mean separation * unit direction, consistent labels.
LabeledDataset gen_class_gaussian_pool(std::size_t classes, std::size_t d, std::size_t n_total,
                                       double separation, std::uint64_t seed);

}  // namespace ppfl
