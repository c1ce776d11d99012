#pragma once
#include <optional>

#include "ppfl/model/glm.hpp"
#include "ppfl/model/membership.hpp"

namespace ppfl {

// The full optimization state z = {theta-block, c-block}.
struct BlockState {
  CanonicalEnsemble ens;
  MembershipMatrix C;
};

// eta_t plus the derived per-block step sizes and the gamma factors entering
// the output-sampling weights: eta1 = eta/E, eta2 = eta, gamma1 = 4*eta,
// gamma2 = eta/2.
struct StepSizes {
  double eta;
  double eta1, eta2;
  double gamma1, gamma2;

  static StepSizes from_eta(double eta_t, std::size_t E) {
    return {eta_t, eta_t / static_cast<double>(E), eta_t, 4.0 * eta_t, eta_t / 2.0};
  }
};

enum class SmoothnessSource { user, power_iteration };

struct SmoothnessEstimates {
  double L1 = 0.0;  // theta-block gradient Lipschitz bound
  double L2 = 0.0;  // c-block gradient Lipschitz bound
  SmoothnessSource source = SmoothnessSource::power_iteration;
  std::optional<double> sigma1_sq, sigma2_sq, delta_sq;  // optional diagnostics
};

// Stationarity record: squared gradient norm for theta plus the squared,
// eta-scaled l1 prox-mapping distance for C.
struct CriterionRecord {
  double grad_theta_norm_sq = 0.0;
  double prox_c_norm1_sq = 0.0;
  double composite = 0.0;
};

}  // namespace ppfl
