#pragma once

#include <json.hpp>

#include "pma/asymptotics.hpp"
#include "pma/dim1.hpp"
#include "pma/pde_check.hpp"
#include "pma/solution.hpp"

// JSON views of the report structs. Keys are snake_case; absent data is
// omitted rather than serialized as null (a zero-sample report still carries
// samples: 0 and its numeric fields).

namespace pma {

inline nlohmann::json to_json(const ResidualReport& rep) {
  return {{"max_abs_residual", rep.max_abs_residual},
          {"at_r", rep.at_r},
          {"at_t", rep.at_t},
          {"samples", rep.samples}};
}

inline nlohmann::json to_json(const GronwallCertificate& cert) {
  return {{"R", cert.R},
          {"sup_distance", cert.sup_distance},
          {"growth_constant", cert.growth_constant},
          {"defect_budget", cert.defect_budget},
          {"admissible", cert.admissible}};
}

inline nlohmann::json to_json(const DecayFit& fit) {
  return {{"exponent", fit.exponent},
          {"frequency", fit.frequency},
          {"amplitude", fit.amplitude},
          {"fit_residual", fit.fit_residual},
          {"window_lo", fit.window_lo},
          {"window_hi", fit.window_hi}};
}

inline nlohmann::json to_json(const LogLimit& lim) {
  return {{"ratio_at_rmax", lim.ratio_at_rmax},
          {"extrapolated_limit", lim.extrapolated},
          {"fit_coefficient", lim.fit_coefficient}};
}

}  // namespace pma
