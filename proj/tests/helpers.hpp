#pragma once
// Shared fixtures for the test binaries: quick random datasets/shards and a
// central-difference gradient oracle, all seeded through the library RNG so
// failures reproduce exactly.
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "ppfl/core/dataset.hpp"
#include "ppfl/core/rng.hpp"
#include "ppfl/fedsim/shard.hpp"
#include "ppfl/model/glm.hpp"

namespace testutil {

inline ppfl::LabeledDataset make_dataset(std::size_t n, std::size_t d, ppfl::Task task,
                                         int n_classes, std::uint64_t key) {
  ppfl::RngStream rng(key);
  ppfl::LabeledDataset ds;
  ds.task = task;
  ds.n_classes = n_classes;
  ds.X = ppfl::DenseMatrix(n, d);
  ds.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) ds.X(i, j) = rng.normal();
    switch (task) {
      case ppfl::Task::regression:
        ds.y[i] = rng.normal();
        break;
      case ppfl::Task::binary:
        ds.y[i] = rng.uniform() < 0.5 ? 0.0 : 1.0;
        break;
      case ppfl::Task::multiclass:
        ds.y[i] = static_cast<double>(rng.uniform_int(static_cast<std::uint64_t>(n_classes)));
        break;
    }
  }
  return ds;
}

inline std::vector<ppfl::ClientShard> make_shards(std::size_t M, std::size_t n, std::size_t d,
                                                  ppfl::Task task, int n_classes,
                                                  std::uint64_t seed) {
  std::vector<ppfl::ClientShard> shards(M);
  for (std::size_t i = 0; i < M; ++i) {
    shards[i].id = i;
    shards[i].train = make_dataset(n + i, d, task, n_classes, seed * 1000 + i);
    shards[i].test = make_dataset(n / 2 + 1, d, task, n_classes, seed * 1000 + 500 + i);
  }
  ppfl::assign_weights_by_size(shards);
  return shards;
}

inline ppfl::MembershipVector random_membership(std::size_t K, ppfl::RngStream& rng) {
  ppfl::MembershipVector c;
  c.c = rng.dirichlet(1.0, K);
  // keep strictly interior so finite differences stay on the simplex
  double sum = 0.0;
  for (double& v : c.c) {
    v = 0.9 * v + 0.1 / static_cast<double>(K);
    sum += v;
  }
  for (double& v : c.c) v /= sum;
  return c;
}

// Central finite difference d/dx f at h = 1e-6.
inline double central_diff(const std::function<double(double)>& f, double x0, double h = 1e-6) {
  return (f(x0 + h) - f(x0 - h)) / (2.0 * h);
}

inline double rel_err(double got, double want) {
  const double denom = std::max({1.0, std::fabs(got), std::fabs(want)});
  return std::fabs(got - want) / denom;
}

}  // namespace testutil
