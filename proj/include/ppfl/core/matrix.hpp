#pragma once
#include <cstddef>
#include <vector>

#include "ppfl/core/error.hpp"

namespace ppfl {

// Row-major dense float64 matrix. Problem sizes here (d <= 1e3, M <= 1e3)
// never justify sparse storage.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const double& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  double* row_ptr(std::size_t i) { return data.data() + i * cols; }
  const double* row_ptr(std::size_t i) const { return data.data() + i * cols; }

  std::size_t size() const { return data.size(); }

  bool all_finite() const;
  double frob_norm_sq() const;
  void add_scaled(const DenseMatrix& other, double s);  // this += s*other
};

bool operator==(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace ppfl
