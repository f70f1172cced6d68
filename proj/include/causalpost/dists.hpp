#pragma once

#include <Eigen/Core>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "causalpost/rng.hpp"

namespace causalpost {

/// Treatment arm of a potential outcome.
enum class Arm : int { kControl = 0, kTreated = 1 };

inline Arm other(Arm a) { return a == Arm::kTreated ? Arm::kControl : Arm::kTreated; }

/// Bivariate normal law of a potential-outcome pair (Y(1), Y(0)).
template <typename Scalar>
struct BasicBvnParams {
  Scalar mu1{0};
  Scalar mu0{0};
  Scalar sigma1{1};
  Scalar sigma0{1};
  Scalar rho{0};

  Scalar mean(Arm a) const { return a == Arm::kTreated ? mu1 : mu0; }
  Scalar sd(Arm a) const { return a == Arm::kTreated ? sigma1 : sigma0; }
};
using BvnParams = BasicBvnParams<double>;

template <typename Scalar>
struct BasicConditionalNormal {
  Scalar mean;
  Scalar sd;
};
using ConditionalNormal = BasicConditionalNormal<double>;

/// Throws std::invalid_argument unless sigma1, sigma0 > 0 and |rho| <= 1.
void validate(const BvnParams& p);

/// Draw from N(mean, sd^2). sd == 0 returns mean without consuming the stream.
double normal_sample(double mean, double sd, Rng& rng);

template <typename Scalar>
Scalar normal_logpdf(Scalar x, Scalar mean, Scalar sd) {
  using std::log;
  const Scalar z = (x - mean) / sd;
  return Scalar(-0.5) * log(Scalar(2) * std::numbers::pi_v<Scalar>) - log(sd) - Scalar(0.5) * z * z;
}

/// Law of the missing arm given the observed one:
///   mean = mu_miss + rho * (sd_miss / sd_obs) * (observed - mu_obs)
///   sd   = sd_miss * sqrt(1 - rho^2)
/// |rho| == 1 gives sd == 0, a deterministic conditional.
template <typename Scalar>
BasicConditionalNormal<Scalar> bvn_conditional(const BasicBvnParams<Scalar>& p, Arm observed_arm,
                                               Scalar observed_value) {
  using std::abs;
  using std::sqrt;
  const Scalar sd_obs = p.sd(observed_arm);
  const Scalar sd_miss = p.sd(other(observed_arm));
  if (!(sd_obs > Scalar(0))) throw std::invalid_argument("bvn_conditional: observed-arm sd must be positive");
  if (!(sd_miss >= Scalar(0))) throw std::invalid_argument("bvn_conditional: missing-arm sd must be nonnegative");
  if (!(abs(p.rho) <= Scalar(1))) throw std::invalid_argument("bvn_conditional: |rho| must be <= 1");
  const Scalar mean =
      p.mean(other(observed_arm)) + p.rho * (sd_miss / sd_obs) * (observed_value - p.mean(observed_arm));
  const Scalar one_minus = Scalar(1) - p.rho * p.rho;
  const Scalar sd = one_minus > Scalar(0) ? sd_miss * sqrt(one_minus) : Scalar(0);
  return {mean, sd};
}

/// Exact bivariate normal log-density at (y1, y0). Requires |rho| < 1.
template <typename Scalar>
Scalar bvn_logpdf(const BasicBvnParams<Scalar>& p, Scalar y1, Scalar y0) {
  using std::abs;
  using std::log;
  using std::log1p;
  if (!(abs(p.rho) < Scalar(1))) throw std::invalid_argument("bvn_logpdf: |rho| must be < 1");
  const Scalar z1 = (y1 - p.mu1) / p.sigma1;
  const Scalar z0 = (y0 - p.mu0) / p.sigma0;
  const Scalar one_minus = Scalar(1) - p.rho * p.rho;
  const Scalar quad = (z1 * z1 - Scalar(2) * p.rho * z1 * z0 + z0 * z0) / one_minus;
  return -log(Scalar(2) * std::numbers::pi_v<Scalar>) - log(p.sigma1) - log(p.sigma0) -
         Scalar(0.5) * log1p(-p.rho * p.rho) - Scalar(0.5) * quad;
}

/// Logistic function, branch-stable for large |x|.
template <typename Scalar>
Scalar expit(Scalar x) {
  using std::exp;
  if (x >= Scalar(0)) return Scalar(1) / (Scalar(1) + exp(-x));
  const Scalar e = exp(x);
  return e / (Scalar(1) + e);
}

/// Bernoulli draw with success probability expit(linear).
int bernoulli_expit(double linear, Rng& rng);

/// Raw nonnegative weights divided by their sum.
Eigen::VectorXd normalize_to_simplex(const Eigen::Ref<const Eigen::VectorXd>& raw);

/// Dirichlet(1, ..., 1) draw: n unit exponentials normalized by their sum.
Eigen::VectorXd dirichlet_ones(Eigen::Index n, Rng& rng);

}  // namespace causalpost
