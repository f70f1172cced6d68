#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "causalpost/model.hpp"
#include "causalpost/rng.hpp"
#include "causalpost/sampler.hpp"

namespace causalpost {

enum class EstimandKind { kIte, kSate, kCate, kPate };

/// How the covariate law is integrated out of the CATE to form a PATE.
enum class PateBackend { kNone, kParametricMc, kBayesianBootstrap, kEmpirical, kClosedForm };

std::string_view to_string(PateBackend backend);
/// Accepts the canonical names and the short aliases mc, bb, ecdf, closed.
PateBackend parse_backend(std::string_view name);

/// Per-draw values of one estimand, aligned with the chain's draws.
struct EstimandDraws {
  EstimandKind kind = EstimandKind::kSate;
  PateBackend backend = PateBackend::kNone;
  Eigen::VectorXd values;
  Eigen::Index subject = -1;  // ITE only
  double at = 0.0;            // CATE only
  int mc_samples = 0;         // parametric MC only

  /// "ite:<i>", "sate", "cate:<l>" or "pate".
  std::string kind_label() const;
};

/// Default Monte Carlo size for the parametric PATE.
inline constexpr int kDefaultPateSamples = 1000;

/// y_i - ym_i for treated subjects, ym_i - y_i for controls. `subject` is 0-based.
EstimandDraws ite_draws(const PosteriorDraws& chain, Eigen::Index subject);

/// Mean over subjects of the per-arm signed differences.
EstimandDraws sate_draws(const PosteriorDraws& chain);

EstimandDraws cate_draws(const PosteriorDraws& chain, double l);

/// (beta01 - beta00) + (beta11 - beta10) eta per draw.
EstimandDraws pate_closed(const PosteriorDraws& chain);

/// Per draw, average of the CATE over S covariate draws L ~ N(eta, tau^2).
EstimandDraws pate_mc(const PosteriorDraws& chain, int samples, Rng& rng);

/// Average of B simulated outcomes of one arm at covariate value l. The
/// nested-simulation route for models without closed-form conditional means.
double mc_conditional_mean(const ParamVector& p, double l, Arm arm, int draws, Rng& rng);

/// Per draw, CATEs at the observed l_i weighted by a fresh Dirichlet(1_n) draw.
EstimandDraws pate_bb(const PosteriorDraws& chain, Rng& rng);

/// Per draw t, sum_i psi(l_i) w(t, i) with caller-supplied weights (T x n).
EstimandDraws pate_weighted(const PosteriorDraws& chain, const Eigen::Ref<const Eigen::MatrixXd>& weights);

/// Per draw, sum_i psi(l_i) / n: the fixed empirical covariate law.
EstimandDraws pate_ecdf(const PosteriorDraws& chain);

/// Parses "ite:<i>", "sate", "cate:<l>", "pate:<backend>" and evaluates it.
/// `samples` is used by the parametric PATE, `rng` by the stochastic backends.
EstimandDraws evaluate_estimand(const PosteriorDraws& chain, std::string_view which, int samples, Rng& rng);

/// Columns draw,kind,backend,value. Draws are numbered from 1.
void write_estimand_draws(std::ostream& out, const std::vector<EstimandDraws>& estimands);

}  // namespace causalpost
