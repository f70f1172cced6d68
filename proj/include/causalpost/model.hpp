#pragma once

#include <Eigen/Core>
#include <array>
#include <string_view>
#include <utility>

#include "causalpost/dgp.hpp"
#include "causalpost/dists.hpp"

namespace causalpost {

/// All inferential parameters: covariate law (eta, tau), the two outcome
/// regressions, and the cross-world correlation rho. Propensity
/// coefficients are deliberately absent: under ignorability they only
/// contribute a constant factor to the posterior.
struct ParamVector {
  double eta = 0.0;
  double tau = 1.0;
  double beta01 = 0.0;
  double beta11 = 0.0;
  double sigma1 = 1.0;
  double beta00 = 0.0;
  double beta10 = 0.0;
  double sigma0 = 1.0;
  double rho = 0.0;

  static constexpr int kSize = 9;
  static constexpr std::array<std::string_view, kSize> kNames{
      "eta", "tau", "beta01", "beta11", "sigma1", "beta00", "beta10", "sigma0", "rho"};
  using Vector = Eigen::Matrix<double, kSize, 1>;

  Vector to_vector() const;
  static ParamVector from_vector(const Vector& v);

  /// Scales positive and rho strictly inside the prior's support.
  bool in_support() const;

  double mean(Arm arm, double l) const {
    return arm == Arm::kTreated ? beta01 + beta11 * l : beta00 + beta10 * l;
  }
  double sd(Arm arm) const { return arm == Arm::kTreated ? sigma1 : sigma0; }
  BvnParams outcome_law(double l) const { return {mean(Arm::kTreated, l), mean(Arm::kControl, l), sigma1, sigma0, rho}; }

  double cate_intercept() const { return beta01 - beta00; }
  double cate_slope() const { return beta11 - beta10; }
  /// psi(l) = (beta01 - beta00) + (beta11 - beta10) l
  double cate(double l) const { return cate_intercept() + cate_slope() * l; }

  friend bool operator==(const ParamVector&, const ParamVector&) = default;
};

/// Missing potential outcome y_i(1 - a_i) per subject, in data order.
using CounterfactualVector = Eigen::VectorXd;

/// Half-width of the uniform prior on rho.
inline constexpr double kRhoBound = 0.9;

/// Flat on every location, flat on the positive half-line for each scale,
/// U(-0.9, 0.9) on rho. Returns 0 inside the support and -inf outside.
double log_prior(const ParamVector& p);

/// (y1, y0) from the factual outcome and the counterfactual by arm.
std::pair<double, double> assemble_pair(const ObservedRecord& rec, double ym_i);

/// Complete-data columns built from observed data plus counterfactuals.
struct CompleteOutcomes {
  Eigen::VectorXd y1;
  Eigen::VectorXd y0;
};
CompleteOutcomes assemble(const ObservedData& data, const Eigen::Ref<const CounterfactualVector>& ym);

/// Sum over subjects of the bivariate outcome log-density plus the normal
/// covariate log-density, without the prior.
double log_complete_likelihood(const ParamVector& p, const CompleteOutcomes& outcomes,
                               const Eigen::Ref<const Eigen::VectorXd>& l);

/// Unnormalized log joint posterior of (parameters, counterfactuals) given
/// observed data. The propensity factor is omitted.
double log_joint_posterior(const ParamVector& p, const Eigen::Ref<const CounterfactualVector>& ym,
                           const ObservedData& data);

}  // namespace causalpost
