#include "ppfl/datagen/generators.hpp"

#include <cmath>

#include "ppfl/core/dataset.hpp"
#include "ppfl/core/error.hpp"
#include "ppfl/core/rng.hpp"

namespace ppfl {

namespace {

std::size_t categorical(RngStream& rng, const double* p, std::size_t K) {
  const double u = rng.uniform();
  double cum = 0.0;
  for (std::size_t k = 0; k + 1 < K; ++k) {
    cum += p[k];
    if (u < cum) return k;
  }
  return K - 1;
}

ClientShard finish_shard(std::size_t id, LabeledDataset&& full, double train_frac,
                         std::uint64_t seed) {
  RngStream rng(rng_key(seed, 0, id, rng_tag::split));
  auto [train, test] = split_train_test(full, train_frac, rng);
  ClientShard s;
  s.id = id;
  s.train = std::move(train);
  s.test = std::move(test);
  return s;
}

}  // namespace

std::pair<std::vector<ClientShard>, MixtureGroundTruth> gen_mixture_synthetic(
    const MixtureSpec& spec, std::uint64_t seed) {
  require(spec.K_true >= 1 && spec.d >= 1 && spec.M >= 1, "mixture: bad dimensions");
  require(spec.n_min >= 1 && spec.n_min <= spec.n_max, "mixture: invalid sample count range");
  require(spec.dirichlet_alpha > 0.0, "mixture: dirichlet alpha must be positive");
  require(spec.task != Task::multiclass, "mixture: regression or binary tasks only");
  require(spec.noise_std >= 0.0, "mixture: negative noise");

  MixtureGroundTruth gt;
  gt.theta_true = DenseMatrix(spec.d, spec.K_true);
  {
    RngStream truth(rng_key(seed, 0, kServer, rng_tag::truth));
    for (double& v : gt.theta_true.data) v = truth.uniform(-1.0, 1.0);
  }
  gt.alpha = MembershipMatrix(spec.M, spec.K_true);
  gt.source_counts.assign(spec.M, std::vector<std::size_t>(spec.K_true, 0));

  std::vector<ClientShard> shards;
  shards.reserve(spec.M);
  for (std::size_t i = 0; i < spec.M; ++i) {
    RngStream rng(rng_key(seed, 0, i, rng_tag::data));
    const std::vector<double> ai = rng.dirichlet(spec.dirichlet_alpha, spec.K_true);
    for (std::size_t k = 0; k < spec.K_true; ++k) gt.alpha.row(i)[k] = ai[k];

    const std::size_t n =
        spec.n_min + static_cast<std::size_t>(rng.uniform_int(spec.n_max - spec.n_min + 1));
    LabeledDataset ds;
    ds.task = spec.task;
    ds.n_classes = spec.task == Task::binary ? 2 : 0;
    ds.X = DenseMatrix(n, spec.d);
    ds.y.resize(n);
    for (std::size_t l = 0; l < n; ++l) {
      const std::size_t k = categorical(rng, ai.data(), spec.K_true);
      ++gt.source_counts[i][k];
      double z = 0.0;
      for (std::size_t j = 0; j < spec.d; ++j) {
        const double x = rng.normal();
        ds.X(l, j) = x;
        z += x * gt.theta_true(j, k);
      }
      if (spec.task == Task::regression) {
        ds.y[l] = z + spec.noise_std * rng.normal();
      } else {
        const double p = 1.0 / (1.0 + std::exp(-z));
        ds.y[l] = rng.uniform() < p ? 1.0 : 0.0;
      }
    }
    shards.push_back(finish_shard(i, std::move(ds), spec.train_frac, seed));
  }
  assign_weights_by_size(shards);
  return {std::move(shards), std::move(gt)};
}

std::pair<std::vector<ClientShard>, std::vector<std::size_t>> gen_domain_heterogeneous(
    const DomainSpec& spec, std::uint64_t seed) {
  require(spec.groups >= 1 && spec.groups <= spec.M, "domain: groups must lie in [1, M]");
  require(spec.classes_per_group >= 1 && spec.d >= 1, "domain: bad dimensions");
  require(spec.groups * spec.classes_per_group >= 2, "domain: need at least two classes");
  require(spec.n_per_client >= 2, "domain: need at least two samples per client");
  require(spec.separation >= 0.0, "domain: negative separation");

  // One shared set of cluster directions; groups disagree only on the labels.
  const std::size_t cpg = spec.classes_per_group;
  DenseMatrix dirs(cpg, spec.d);
  {
    RngStream truth(rng_key(seed, 0, kServer, rng_tag::truth));
    for (std::size_t j = 0; j < cpg; ++j) {
      double norm = 0.0;
      for (std::size_t p = 0; p < spec.d; ++p) {
        dirs(j, p) = truth.normal();
        norm += dirs(j, p) * dirs(j, p);
      }
      norm = std::sqrt(norm);
      require(norm > 0.0, "domain: degenerate direction");
      for (std::size_t p = 0; p < spec.d; ++p) dirs(j, p) /= norm;
    }
  }

  std::vector<std::size_t> group_of(spec.M);
  std::vector<ClientShard> shards;
  shards.reserve(spec.M);
  for (std::size_t i = 0; i < spec.M; ++i) {
    const std::size_t g = i % spec.groups;
    group_of[i] = g;
    RngStream rng(rng_key(seed, 0, i, rng_tag::data));
    LabeledDataset ds;
    ds.task = Task::multiclass;
    ds.n_classes = static_cast<int>(spec.groups * cpg);
    ds.X = DenseMatrix(spec.n_per_client, spec.d);
    ds.y.resize(spec.n_per_client);
    for (std::size_t l = 0; l < spec.n_per_client; ++l) {
      const std::size_t j = static_cast<std::size_t>(rng.uniform_int(cpg));
      for (std::size_t p = 0; p < spec.d; ++p)
        ds.X(l, p) = spec.separation * dirs(j, p) + rng.normal();
      ds.y[l] = static_cast<double>(g * cpg + j);
    }
    shards.push_back(finish_shard(i, std::move(ds), spec.train_frac, seed));
  }
  assign_weights_by_size(shards);
  return {std::move(shards), std::move(group_of)};
}

LabeledDataset gen_class_gaussian_pool(std::size_t classes, std::size_t d, std::size_t n_total,
                                       double separation, std::uint64_t seed) {
  require(classes >= 2 && d >= 1, "class pool: need >= 2 classes and d >= 1");
  require(n_total >= classes, "class pool: need at least one sample per class");
  require(separation >= 0.0, "class pool: negative separation");

  DenseMatrix dirs(classes, d);
  RngStream truth(rng_key(seed, 0, kServer, rng_tag::truth));
  for (std::size_t c = 0; c < classes; ++c) {
    double norm = 0.0;
    for (std::size_t p = 0; p < d; ++p) {
      dirs(c, p) = truth.normal();
      norm += dirs(c, p) * dirs(c, p);
    }
    norm = std::sqrt(norm);
    require(norm > 0.0, "class pool: degenerate direction");
    for (std::size_t p = 0; p < d; ++p) dirs(c, p) /= norm;
  }

  LabeledDataset ds;
  ds.task = classes == 2 ? Task::binary : Task::multiclass;
  ds.n_classes = static_cast<int>(classes);
  ds.X = DenseMatrix(n_total, d);
  ds.y.resize(n_total);
  RngStream rng(rng_key(seed, 0, kServer, rng_tag::data));
  for (std::size_t l = 0; l < n_total; ++l) {
    const std::size_t c = l % classes;  // balanced classes
    for (std::size_t p = 0; p < d; ++p) ds.X(l, p) = separation * dirs(c, p) + rng.normal();
    ds.y[l] = static_cast<double>(c);
  }
  return ds;
}

std::vector<ClientShard> gen_dirichlet_partition(const LabeledDataset& base, std::size_t M,
                                                 double alpha, std::uint64_t seed,
                                                 double train_frac) {
  base.validate();
  require(M >= 1, "dirichlet partition: M must be >= 1");
  require(alpha > 0.0, "dirichlet partition: alpha must be positive");
  require(base.task != Task::regression, "dirichlet partition: classification base required");
  require(base.n() >= M, "dirichlet partition: fewer samples than clients");
  const std::size_t C = static_cast<std::size_t>(base.n_classes);

  std::vector<std::vector<std::size_t>> members;
  bool ok = false;
  for (std::uint64_t attempt = 0; attempt < 100 && !ok; ++attempt) {
    RngStream rng(rng_key(seed, attempt, kServer, rng_tag::data));
    members.assign(M, {});
    for (std::size_t c = 0; c < C; ++c) {
      const std::vector<double> q = rng.dirichlet(alpha, M);
      for (std::size_t l = 0; l < base.n(); ++l) {
        if (static_cast<std::size_t>(base.y[l]) != c) continue;
        members[categorical(rng, q.data(), M)].push_back(l);
      }
    }
    ok = true;
    for (const auto& m : members)
      if (m.empty()) ok = false;
  }
  require(ok, "dirichlet partition: persistent empty shard after 100 attempts");

  std::vector<ClientShard> shards;
  shards.reserve(M);
  for (std::size_t i = 0; i < M; ++i) {
    LabeledDataset ds;
    ds.task = base.task;
    ds.n_classes = base.n_classes;
    ds.X = DenseMatrix(members[i].size(), base.dim());
    ds.y.resize(members[i].size());
    for (std::size_t r = 0; r < members[i].size(); ++r) {
      const std::size_t src = members[i][r];
      for (std::size_t j = 0; j < base.dim(); ++j) ds.X(r, j) = base.X(src, j);
      ds.y[r] = base.y[src];
    }
    shards.push_back(finish_shard(i, std::move(ds), train_frac, seed));
  }
  assign_weights_by_size(shards);
  return shards;
}

}  // namespace ppfl
