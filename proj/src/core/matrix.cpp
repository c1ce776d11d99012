#include "ppfl/core/matrix.hpp"

#include <cmath>

namespace ppfl {

bool DenseMatrix::all_finite() const {
  for (double v : data)
    if (!std::isfinite(v)) return false;
  return true;
}

double DenseMatrix::frob_norm_sq() const {
  double s = 0.0;
  for (double v : data) s += v * v;
  return s;
}

void DenseMatrix::add_scaled(const DenseMatrix& other, double s) {
  require(rows == other.rows && cols == other.cols, "matrix shape mismatch in add_scaled");
  for (std::size_t i = 0; i < data.size(); ++i) data[i] += s * other.data[i];
}

bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
  return a.rows == b.rows && a.cols == b.cols && a.data == b.data;
}

}  // namespace ppfl
