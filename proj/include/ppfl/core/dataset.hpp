#pragma once
#include <utility>
#include <vector>

#include "ppfl/core/matrix.hpp"
#include "ppfl/core/rng.hpp"

namespace ppfl {

enum class Task { regression, binary, multiclass };

struct LabeledDataset {
  DenseMatrix X;          // n x d
  std::vector<double> y;  // regression targets, or integral class ids
  Task task = Task::regression;
  int n_classes = 0;      // classification only (binary: 2)

  std::size_t n() const { return X.rows; }
  std::size_t dim() const { return X.cols; }
  void validate() const;
};

// Shuffled disjoint split with sizes (ceil(frac*n), n - ceil(frac*n)).
std::pair<LabeledDataset, LabeledDataset> split_train_test(const LabeledDataset& ds,
                                                           double frac, RngStream& rng);

}  // namespace ppfl
