#pragma once

// Deliberately incorrect posterior summaries, kept for side-by-side
// comparison with the correct estimands. Nothing here is a valid estimator;
// every export carries the pitfall_ prefix.

#include <Eigen/Core>
#include <iosfwd>
#include <string_view>

#include "causalpost/dgp.hpp"
#include "causalpost/model.hpp"
#include "causalpost/rng.hpp"
#include "causalpost/sampler.hpp"

namespace causalpost {

enum class PitfallKind { kPpiPate, kPpiIte, kKeilStyle };

std::string_view to_string(PitfallKind kind);
/// Accepts ppi_pate, ppi_ite, keil_style and keil.
PitfallKind parse_pitfall(std::string_view name);

/// Posterior-predictive "PATE": at each observed l_i simulate both arms
/// (averaging `budget` simulations per arm, 1 in the usual recipe) and
/// average the differences over subjects.
double pitfall_ppi_pate_draw(const ParamVector& p, const ObservedData& data, Rng& rng, int budget = 1);

/// Posterior-predictive "ITE": both potential outcomes simulated
/// independently at l_i, including the factual one that is already known.
double pitfall_ppi_ite_draw(const ParamVector& p, double l, Rng& rng, int budget = 1);

/// Resample m covariate values uniformly with replacement from the observed
/// l, simulate one outcome per arm at each, average the differences.
double pitfall_keil_style_draw(const ParamVector& p, const ObservedData& data, int m, Rng& rng);

struct PitfallOptions {
  Eigen::Index subject = 0;  // ppi_ite
  int m = 0;                 // keil_style; 0 means n
  int budget = 1;            // ppi_pate, ppi_ite
};

struct PitfallReport {
  PitfallKind name = PitfallKind::kPpiPate;
  Eigen::VectorXd draws;
  /// Correct counterpart per draw: the empirical-law PATE for ppi_pate and
  /// keil_style, the CATE at l_subject for ppi_ite.
  Eigen::VectorXd reference_draws;
  double sd_ratio = 0.0;
};

PitfallReport pitfall_report(const PosteriorDraws& chain, PitfallKind name, Rng& rng, const PitfallOptions& options = {});

/// Columns name,mean_pitfall,mean_reference,sd_pitfall,sd_reference,sd_ratio.
void write_pitfall_report(std::ostream& out, const PitfallReport& report);

}  // namespace causalpost
