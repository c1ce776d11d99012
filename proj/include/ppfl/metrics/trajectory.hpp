#pragma once
#include <cstdint>
#include <utility>
#include <vector>

#include "ppfl/core/config.hpp"
#include "ppfl/fedsim/comm.hpp"
#include "ppfl/optim/types.hpp"

namespace ppfl {

// One solver round. The criterion is measured at the pre-update state z^t;
// objective and metrics are measured at the post-update state z^{t+1}, so the
// final row describes the state the run returns.
struct RoundRecord {
  std::size_t round = 0;
  int block = 0;  // 1 = theta, 2 = membership, 3 = both (alternating)
  double objective = 0.0;
  CriterionRecord criterion;
  double train_weighted = 0.0, train_mean = 0.0;
  double test_weighted = 0.0, test_mean = 0.0;
  std::uint64_t cum_broadcast = 0, cum_upload = 0, cum_sync = 0;
};

struct RunTrajectory {
  RunConfig config;
  Task task = Task::regression;
  std::vector<RoundRecord> rounds;
  // C snapshots at the configured rounds (round index, M x K matrix).
  std::vector<std::pair<std::size_t, MembershipMatrix>> snapshots;
  // Output-sampling record: per-round weights, the sampled index t', and the
  // pre-update state z^{t'} captured in flight.
  std::vector<double> output_weights;
  std::size_t output_index = 0;
  BlockState output_state;
  BlockState final_state;
  CommLedger ledger;
  SmoothnessEstimates smoothness;
  double wall_seconds = 0.0;
};

}  // namespace ppfl
