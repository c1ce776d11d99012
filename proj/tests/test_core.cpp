#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cmath>
#include <set>

#include "ppfl/core/config.hpp"
#include "ppfl/core/dataset.hpp"
#include "ppfl/core/error.hpp"
#include "ppfl/core/matrix.hpp"
#include "ppfl/core/parallel.hpp"
#include "ppfl/core/rng.hpp"

#include "helpers.hpp"

using namespace ppfl;

TEST_CASE("dense matrix arithmetic") {
  DenseMatrix a(2, 3, 1.0);
  DenseMatrix b(2, 3, 0.5);
  a.add_scaled(b, 2.0);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.data[i] == doctest::Approx(2.0));
  CHECK(a.frob_norm_sq() == doctest::Approx(6.0 * 4.0));
  CHECK(a.all_finite());
  a(1, 2) = std::nan("");
  CHECK_FALSE(a.all_finite());

  CHECK_THROWS_AS(b.add_scaled(DenseMatrix(3, 2), 1.0), Error);
}

TEST_CASE("rng streams are keyed and reproducible") {
  RngStream a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const double va = a.uniform();
    CHECK(va == b.uniform());
    CHECK(va >= 0.0);
    CHECK(va < 1.0);
  }
  // different key should diverge immediately
  RngStream a2(42);
  CHECK(a2.uniform() != c.uniform());

  // tag separation: same (seed, round, client) but different purpose
  CHECK(rng_key(1, 0, 0, rng_tag::theta_batch) != rng_key(1, 0, 0, rng_tag::c_batch));
  CHECK(rng_key(1, 0, 0, rng_tag::data) != rng_key(1, 0, 1, rng_tag::data));
  CHECK(rng_key(1, 0, kServer, rng_tag::block_choice) !=
        rng_key(1, 1, kServer, rng_tag::block_choice));
}

TEST_CASE("rng dirichlet lands on the simplex") {
  RngStream rng(7);
  for (int rep = 0; rep < 50; ++rep) {
    const auto v = rng.dirichlet(0.5, 5);
    double sum = 0.0;
    for (double x : v) {
      CHECK(x > 0.0);
      sum += x;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("rng uniform_int stays in range and covers it") {
  RngStream rng(9);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const std::uint64_t v = rng.uniform_int(7);
    CHECK(v < 7);
    seen.insert(v);
  }
  CHECK(seen.size() == 7);
}

TEST_CASE("train/test split sizes and content conservation") {
  const auto ds = testutil::make_dataset(11, 3, Task::regression, 0, 77);
  RngStream rng(5);
  const auto [train, test] = split_train_test(ds, 0.8, rng);
  CHECK(train.n() == 9);  // ceil(0.8 * 11)
  CHECK(test.n() == 2);

  // every original row shows up exactly once across the two splits
  std::multiset<double> want(ds.y.begin(), ds.y.end());
  std::multiset<double> got(train.y.begin(), train.y.end());
  got.insert(test.y.begin(), test.y.end());
  CHECK(want == got);

  RngStream rng2(5);
  const auto [full, empty] = split_train_test(ds, 1.0, rng2);
  CHECK(full.n() == 11);
  CHECK(empty.n() == 0);

  LabeledDataset none;
  RngStream rng3(5);
  CHECK_THROWS_AS(split_train_test(none, 0.8, rng3), Error);
}

TEST_CASE("parallel_for matches serial and propagates exceptions") {
  std::vector<double> serial(101), parallel(101);
  auto body = [](std::size_t i) { return std::sqrt(static_cast<double>(i)) * 3.5; };
  parallel_for(serial.size(), 1, [&](std::size_t i) { serial[i] = body(i); });
  parallel_for(parallel.size(), 4, [&](std::size_t i) { parallel[i] = body(i); });
  CHECK(serial == parallel);

  CHECK_THROWS_AS(parallel_for(8, 4,
                               [&](std::size_t i) {
                                 if (i == 5) throw Error(ErrCode::runtime, "boom");
                               }),
                  Error);
}

TEST_CASE("run config validation") {
  RunConfig cfg;
  CHECK_NOTHROW(cfg.validate());

  RunConfig bad = cfg;
  bad.rho1 = 0.7;  // sum != 1
  CHECK_THROWS_AS(bad.validate(), Error);

  bad = cfg;
  bad.eta.value = 0.0;
  CHECK_THROWS_AS(bad.validate(), Error);

  bad = cfg;
  bad.K = 0;
  CHECK_THROWS_AS(bad.validate(), Error);

  bad = cfg;
  bad.epsilon_floor = 0.3;
  bad.K = 4;  // 4 * 0.3 >= 0.5: floor would leave no simplex room
  CHECK_THROWS_AS(bad.validate(), Error);

  bad = cfg;
  bad.affinity_source = "nearest";
  CHECK_THROWS_AS(bad.validate(), Error);

  bad = cfg;
  bad.affinity_source = "csv";
  CHECK_THROWS_AS(bad.validate(), Error);  // missing path

  bad = cfg;
  bad.batch.full = false;
  bad.batch.size = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("eta schedules") {
  EtaSpec eta;
  eta.value = 0.1;
  CHECK(eta.at(0) == 0.1);
  CHECK(eta.at(99) == 0.1);
  eta.schedule = EtaSchedule::inv_sqrt;
  CHECK(eta.at(0) == doctest::Approx(0.1));
  CHECK(eta.at(3) == doctest::Approx(0.1 / 2.0));
}

TEST_CASE("snapshot round defaults") {
  RunConfig cfg;
  cfg.T = 10;
  CHECK(cfg.effective_snapshot_rounds() == std::vector<std::size_t>{0, 5, 10});
  cfg.snapshot_rounds = {1, 2};
  CHECK(cfg.effective_snapshot_rounds() == std::vector<std::size_t>{1, 2});
  cfg.snapshot_rounds.clear();
  cfg.T = 0;
  CHECK(cfg.effective_snapshot_rounds() == std::vector<std::size_t>{0});
}

TEST_CASE("error codes carry through") {
  try {
    fail(ErrCode::step_bound, "bound");
  } catch (const Error& e) {
    CHECK(e.code() == ErrCode::step_bound);
    CHECK(std::string(e.what()) == "bound");
  }
}
