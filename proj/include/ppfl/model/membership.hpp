#pragma once
#include <cstddef>
#include <vector>

#include "ppfl/core/error.hpp"

namespace ppfl {

// Simplex-constrained mixture weights of one client over the K canonical
// models. Entries stay >= the configured floor after every mirror step.
struct MembershipVector {
  std::vector<double> c;

  static MembershipVector uniform(std::size_t K);
  std::size_t K() const { return c.size(); }
  void validate(double eps_floor = 1e-6) const;
};

// M stacked membership rows (M x K, row-major).
struct MembershipMatrix {
  std::size_t M = 0, K = 0;
  std::vector<double> data;

  MembershipMatrix() = default;
  MembershipMatrix(std::size_t m, std::size_t k, double fill = 0.0)
      : M(m), K(k), data(m * k, fill) {}

  static MembershipMatrix uniform(std::size_t M, std::size_t K);

  double* row(std::size_t i) { return data.data() + i * K; }
  const double* row(std::size_t i) const { return data.data() + i * K; }
  MembershipVector row_vec(std::size_t i) const;
  void set_row(std::size_t i, const MembershipVector& v);
};

bool operator==(const MembershipMatrix& a, const MembershipMatrix& b);

}  // namespace ppfl
