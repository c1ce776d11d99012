#include "ppfl/fedsim/comm.hpp"

namespace ppfl {

void CommLedger::add_theta_round(std::size_t M) {
  const std::uint64_t theta = static_cast<std::uint64_t>(canonical_floats) * K;
  broadcast += theta * M;
  upload += theta * M;
  sync += theta * M;
}

void CommLedger::add_c_round(std::size_t M) {
  broadcast += static_cast<std::uint64_t>(K) * M;
  upload += static_cast<std::uint64_t>(K) * M;
  sync += static_cast<std::uint64_t>(K) * M;
}

void CommLedger::add_alternating_round(std::size_t M) {
  const std::uint64_t both = static_cast<std::uint64_t>(canonical_floats) * K + K;
  broadcast += both * M;
  upload += both * M;
  // no synchronization leg: the next round's broadcast carries the refresh
}

void CommLedger::add_clustered_round(std::size_t M) {
  broadcast += static_cast<std::uint64_t>(canonical_floats) * K * M;
  upload += static_cast<std::uint64_t>(canonical_floats) * M;
  sync += static_cast<std::uint64_t>(canonical_floats) * M;
}

double CommLedger::strawman_ratio() const {
  const double s = static_cast<double>(canonical_floats);
  const double k = static_cast<double>(K);
  if (s <= 0.0 || k <= 0.0) return 0.0;
  return (s + k) / (k * s);
}

}  // namespace ppfl
