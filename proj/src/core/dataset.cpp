#include "ppfl/core/dataset.hpp"

#include <cmath>
#include <numeric>

namespace ppfl {

void LabeledDataset::validate() const {
  require(X.rows == y.size(), "feature row count must equal label count");
  require(X.all_finite(), "non-finite feature entries");
  if (task != Task::regression) {
    int c = task == Task::binary ? 2 : n_classes;
    require(c >= 2, "classification needs >= 2 classes");
    for (double v : y) {
      double r = std::round(v);
      require(r == v && r >= 0.0 && r < static_cast<double>(c),
              "classification labels must be integers in [0, C)");
    }
  }
}

std::pair<LabeledDataset, LabeledDataset> split_train_test(const LabeledDataset& ds,
                                                           double frac, RngStream& rng) {
  require(ds.n() > 0, "empty shard");
  require(frac > 0.0 && frac <= 1.0, "split fraction must lie in (0, 1]");

  const std::size_t n = ds.n();
  const std::size_t d = ds.dim();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  rng.shuffle(idx);

  const auto m = static_cast<std::size_t>(std::ceil(frac * static_cast<double>(n)));

  auto take = [&](std::size_t lo, std::size_t hi) {
    LabeledDataset out;
    out.task = ds.task;
    out.n_classes = ds.n_classes;
    out.X = DenseMatrix(hi - lo, d);
    out.y.resize(hi - lo);
    for (std::size_t r = lo; r < hi; ++r) {
      const std::size_t src = idx[r];
      for (std::size_t j = 0; j < d; ++j) out.X(r - lo, j) = ds.X(src, j);
      out.y[r - lo] = ds.y[src];
    }
    return out;
  };

  return {take(0, m), take(m, n)};
}

}  // namespace ppfl
