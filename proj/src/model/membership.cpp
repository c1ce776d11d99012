#include "ppfl/model/membership.hpp"

#include <cmath>

namespace ppfl {

MembershipVector MembershipVector::uniform(std::size_t K) {
  require(K >= 1, "membership needs K >= 1");
  MembershipVector v;
  v.c.assign(K, 1.0 / static_cast<double>(K));
  return v;
}

void MembershipVector::validate(double eps_floor) const {
  require(!c.empty(), "empty membership vector");
  double s = 0.0;
  for (double v : c) {
    require(std::isfinite(v), "non-finite membership entry");
    require(v >= eps_floor, "membership entry below floor");
    s += v;
  }
  require(std::abs(s - 1.0) <= 1e-9, "membership must sum to 1 within 1e-9");
}

MembershipMatrix MembershipMatrix::uniform(std::size_t M, std::size_t K) {
  MembershipMatrix m(M, K, 1.0 / static_cast<double>(K));
  return m;
}

MembershipVector MembershipMatrix::row_vec(std::size_t i) const {
  MembershipVector v;
  v.c.assign(row(i), row(i) + K);
  return v;
}

void MembershipMatrix::set_row(std::size_t i, const MembershipVector& v) {
  require(v.K() == K, "membership row length mismatch");
  for (std::size_t k = 0; k < K; ++k) row(i)[k] = v.c[k];
}

bool operator==(const MembershipMatrix& a, const MembershipMatrix& b) {
  return a.M == b.M && a.K == b.K && a.data == b.data;
}

}  // namespace ppfl
