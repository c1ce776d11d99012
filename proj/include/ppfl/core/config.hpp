#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ppfl {

enum class Architecture { prediction_mixture, parameter_mixture, loss_mixture };
enum class Algorithm { rbcd, alternating, fedavg, local, clustered };
enum class EtaSchedule { constant, inv_sqrt };

struct BatchSpec {
  bool full = true;
  std::size_t size = 0;  // used when !full
};

struct EtaSpec {
  EtaSchedule schedule = EtaSchedule::constant;
  double value = 0.05;  // constant eta, or eta0 for inv_sqrt
  double at(std::size_t t) const;
};

// Optional overrides / diagnostics for the smoothness machinery. sigma/delta
// are variance-style constants that cannot be estimated from data alone; they
// only enter the alternating-variant step bound when supplied.
struct SmoothnessOverride {
  std::optional<double> L1, L2;
  std::optional<double> sigma1_sq, sigma2_sq, delta_sq;
};

struct RunConfig {
  std::uint64_t seed = 1;
  std::size_t M = 0;  // 0 = take from the data
  std::size_t K = 1;
  std::size_t T = 100;
  std::size_t E = 1;
  EtaSpec eta;
  double lambda = 0.0;
  double rho1 = 0.5, rho2 = 0.5;
  BatchSpec batch;
  Architecture architecture = Architecture::prediction_mixture;
  double epsilon_floor = 1e-6;
  Algorithm algorithm = Algorithm::rbcd;
  std::vector<std::size_t> snapshot_rounds;  // empty = {0, T/2, T}
  SmoothnessOverride smoothness;
  std::string affinity_source = "all_ones";  // all_ones | label_histogram | csv
  std::string affinity_csv;                  // W path when affinity_source == csv

  std::vector<std::size_t> effective_snapshot_rounds() const;
  void validate() const;
};

const char* to_string(Architecture a);
const char* to_string(Algorithm a);
const char* to_string(EtaSchedule s);

}  // namespace ppfl
