#pragma once
#include <cstddef>
#include <cstdint>

namespace ppfl {

// Float-count accounting of everything that crosses the client-server wire.
// canonical_floats is the size of one canonical model (d, or d*C for the
// softmax link); K the number of canonical models.
struct CommLedger {
  std::size_t canonical_floats = 0;
  std::size_t K = 0;
  std::uint64_t broadcast = 0;
  std::uint64_t upload = 0;
  std::uint64_t sync = 0;

  std::uint64_t total() const { return broadcast + upload + sync; }

  // One theta round: every client receives theta (s*K), uploads its delta
  // (s*K), and the server pushes the aggregate back out (s*K).
  void add_theta_round(std::size_t M);
  // One membership round: each client gets its Laplacian slice (K floats),
  // uploads c_i (K), and receives the refreshed slice (K).
  void add_c_round(std::size_t M);
  // One alternating round: theta and the slice travel together both ways and
  // the extra synchronization broadcast is saved.
  void add_alternating_round(std::size_t M);
  // One clustered-FL round: all K cluster models go down (K*s), the client
  // uploads one model-sized delta (s) and receives its cluster's refresh (s).
  void add_clustered_round(std::size_t M);

  // Replicated-ensemble strawman: a mixture scheme with no shared canonical
  // pool moves K full models (s floats each) per client-round, where this
  // scheme moves one model-sized payload plus the K mixture weights.
  // Bookkeeping form: (s + K) / (K * s).
  double strawman_ratio() const;
};

}  // namespace ppfl
