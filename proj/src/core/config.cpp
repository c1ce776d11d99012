#include "ppfl/core/config.hpp"

#include <cmath>

#include "ppfl/core/error.hpp"

namespace ppfl {

double EtaSpec::at(std::size_t t) const {
  switch (schedule) {
    case EtaSchedule::constant:
      return value;
    case EtaSchedule::inv_sqrt:
      return value / std::sqrt(static_cast<double>(t + 1));
  }
  return value;
}

std::vector<std::size_t> RunConfig::effective_snapshot_rounds() const {
  if (!snapshot_rounds.empty()) return snapshot_rounds;
  if (T == 0) return {0};
  return {0, T / 2, T};
}

void RunConfig::validate() const {
  require(K >= 1, "K must be >= 1", ErrCode::config);
  require(E >= 1, "E must be >= 1", ErrCode::config);
  require(lambda >= 0.0, "lambda must be >= 0", ErrCode::config);
  require(rho1 >= 0.0 && rho2 >= 0.0 && std::abs(rho1 + rho2 - 1.0) <= 1e-12,
          "block probabilities must be nonnegative and sum to 1", ErrCode::config);
  require(eta.value > 0.0, "eta must be > 0", ErrCode::config);
  require(epsilon_floor > 0.0 &&
              epsilon_floor * static_cast<double>(K) < 0.5,
          "epsilon_floor must be positive and small relative to 1/K", ErrCode::config);
  if (!batch.full) require(batch.size >= 1, "batch size must be >= 1", ErrCode::config);
  require(affinity_source == "all_ones" || affinity_source == "label_histogram" ||
              affinity_source == "csv",
          "affinity_source must be all_ones, label_histogram, or csv", ErrCode::config);
  if (affinity_source == "csv")
    require(!affinity_csv.empty(), "affinity_source csv requires affinity_csv", ErrCode::config);
}

const char* to_string(Architecture a) {
  switch (a) {
    case Architecture::prediction_mixture: return "prediction_mixture";
    case Architecture::parameter_mixture: return "parameter_mixture";
    case Architecture::loss_mixture: return "loss_mixture";
  }
  return "?";
}

const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::rbcd: return "rbcd";
    case Algorithm::alternating: return "alternating";
    case Algorithm::fedavg: return "fedavg";
    case Algorithm::local: return "local";
    case Algorithm::clustered: return "clustered";
  }
  return "?";
}

const char* to_string(EtaSchedule s) {
  return s == EtaSchedule::constant ? "constant" : "inv_sqrt";
}

}  // namespace ppfl
