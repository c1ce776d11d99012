#include <doctest.h>

#include <cmath>
#include <set>

#include "ppfl/core/error.hpp"
#include "ppfl/datagen/generators.hpp"
#include "ppfl/fedsim/shard.hpp"

using namespace ppfl;

TEST_CASE("mixture benchmark: shapes, determinism, sample accounting") {
  MixtureSpec spec;
  spec.M = 6;
  spec.K_true = 3;
  spec.d = 5;
  spec.n_min = 20;
  spec.n_max = 40;

  auto [shards, truth] = gen_mixture_synthetic(spec, 42);
  REQUIRE(shards.size() == spec.M);
  CHECK(truth.theta_true.rows == spec.d);
  CHECK(truth.theta_true.cols == spec.K_true);
  CHECK(truth.alpha.M == spec.M);
  CHECK(truth.alpha.K == spec.K_true);
  REQUIRE(truth.source_counts.size() == spec.M);

  double wsum = 0.0;
  for (std::size_t i = 0; i < spec.M; ++i) {
    const ClientShard& s = shards[i];
    CHECK(s.id == i);
    const std::size_t n = s.train.n() + s.test.n();
    CHECK(n >= spec.n_min);
    CHECK(n <= spec.n_max);
    CHECK(s.train.n() == static_cast<std::size_t>(std::ceil(spec.train_frac * double(n))));
    CHECK(s.train.dim() == spec.d);
    // the per-source draw counts must add back up to the client sample count
    std::size_t drawn = 0;
    for (std::size_t k = 0; k < spec.K_true; ++k) drawn += truth.source_counts[i][k];
    CHECK(drawn == n);
    truth.alpha.row_vec(i).validate(0.0);
    wsum += s.weight;
  }
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-12));

  for (std::size_t p = 0; p < spec.d; ++p)
    for (std::size_t k = 0; k < spec.K_true; ++k) {
      CHECK(truth.theta_true(p, k) >= -1.0);
      CHECK(truth.theta_true(p, k) <= 1.0);
    }

  auto [shards2, truth2] = gen_mixture_synthetic(spec, 42);
  CHECK(truth2.theta_true == truth.theta_true);
  CHECK(truth2.alpha == truth.alpha);
  CHECK(shards2[3].train.X == shards[3].train.X);
  CHECK(shards2[3].train.y == shards[3].train.y);

  auto [shards3, truth3] = gen_mixture_synthetic(spec, 43);
  CHECK_FALSE(truth3.theta_true == truth.theta_true);
}

TEST_CASE("mixture benchmark: binary task labels in {0,1}") {
  MixtureSpec spec;
  spec.M = 3;
  spec.K_true = 2;
  spec.d = 4;
  spec.n_min = 30;
  spec.n_max = 30;
  spec.task = Task::binary;

  auto [shards, truth] = gen_mixture_synthetic(spec, 7);
  bool saw0 = false, saw1 = false;
  for (const ClientShard& s : shards) {
    CHECK(s.train.task == Task::binary);
    CHECK(s.train.n_classes == 2);
    for (double v : s.train.y) {
      CHECK((v == 0.0 || v == 1.0));
      (v == 0.0 ? saw0 : saw1) = true;
    }
  }
  CHECK(saw0);
  CHECK(saw1);
}

TEST_CASE("domain benchmark: round-robin groups and disjoint label ranges") {
  DomainSpec spec;
  spec.M = 10;
  spec.groups = 4;
  spec.classes_per_group = 2;
  spec.d = 6;
  spec.n_per_client = 40;

  auto [shards, group_of] = gen_domain_heterogeneous(spec, 11);
  REQUIRE(shards.size() == spec.M);
  REQUIRE(group_of.size() == spec.M);
  const int total_classes = static_cast<int>(spec.groups * spec.classes_per_group);

  for (std::size_t i = 0; i < spec.M; ++i) {
    CHECK(group_of[i] == i % spec.groups);
    CHECK(shards[i].train.task == Task::multiclass);
    CHECK(shards[i].train.n_classes == total_classes);
    CHECK(shards[i].train.n() + shards[i].test.n() == spec.n_per_client);
    // each group labels into its own window of class ids
    const double lo = double(group_of[i] * spec.classes_per_group);
    const double hi = lo + double(spec.classes_per_group);
    for (double v : shards[i].train.y) {
      CHECK(v >= lo);
      CHECK(v < hi);
    }
  }

  auto [shards2, group2] = gen_domain_heterogeneous(spec, 11);
  CHECK(shards2[5].train.X == shards[5].train.X);
  CHECK(group2 == group_of);
}

TEST_CASE("dirichlet partition: conservation and non-empty clients") {
  const LabeledDataset pool = gen_class_gaussian_pool(3, 4, 300, 2.0, 9);
  REQUIRE(pool.n() == 300);
  CHECK(pool.n_classes == 3);
  // balanced pool: class l appears n/classes times
  std::vector<std::size_t> per_class(3, 0);
  for (double v : pool.y) per_class[static_cast<std::size_t>(v)] += 1;
  for (std::size_t c = 0; c < 3; ++c) CHECK(per_class[c] == 100);

  auto shards = gen_dirichlet_partition(pool, 5, 0.5, 21);
  REQUIRE(shards.size() == 5);
  std::size_t total = 0;
  for (const ClientShard& s : shards) {
    CHECK(s.train.n() > 0);
    total += s.train.n() + s.test.n();
  }
  CHECK(total == pool.n());

  // every pooled sample lands on exactly one client: match by feature rows
  std::multiset<double> pool_sig, shard_sig;
  for (std::size_t l = 0; l < pool.n(); ++l) pool_sig.insert(pool.X(l, 0));
  for (const ClientShard& s : shards) {
    for (std::size_t l = 0; l < s.train.n(); ++l) shard_sig.insert(s.train.X(l, 0));
    for (std::size_t l = 0; l < s.test.n(); ++l) shard_sig.insert(s.test.X(l, 0));
  }
  CHECK(pool_sig == shard_sig);

  auto again = gen_dirichlet_partition(pool, 5, 0.5, 21);
  CHECK(again[2].train.X == shards[2].train.X);
}

TEST_CASE("dirichlet partition input errors") {
  LabeledDataset reg;
  reg.X = DenseMatrix(10, 2);
  reg.y.assign(10, 0.0);
  reg.task = Task::regression;
  CHECK_THROWS_AS(gen_dirichlet_partition(reg, 2, 1.0, 1), Error);  // needs classes

  const LabeledDataset pool = gen_class_gaussian_pool(2, 3, 4, 2.0, 9);
  CHECK_THROWS_AS(gen_dirichlet_partition(pool, 10, 1.0, 1), Error);  // M > n
}
