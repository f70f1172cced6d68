#include "causalpost/model.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace causalpost {

ParamVector::Vector ParamVector::to_vector() const {
  Vector v;
  v << eta, tau, beta01, beta11, sigma1, beta00, beta10, sigma0, rho;
  return v;
}

ParamVector ParamVector::from_vector(const Vector& v) {
  return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8]};
}

bool ParamVector::in_support() const {
  return tau > 0 && sigma1 > 0 && sigma0 > 0 && rho > -kRhoBound && rho < kRhoBound && to_vector().allFinite();
}

double log_prior(const ParamVector& p) {
  return p.in_support() ? 0.0 : -std::numeric_limits<double>::infinity();
}

std::pair<double, double> assemble_pair(const ObservedRecord& rec, double ym_i) {
  return rec.a == 1 ? std::pair{rec.y, ym_i} : std::pair{ym_i, rec.y};
}

CompleteOutcomes assemble(const ObservedData& data, const Eigen::Ref<const CounterfactualVector>& ym) {
  if (ym.size() != data.size()) throw std::invalid_argument("assemble: counterfactual length does not match data");
  const auto treated = (data.a.array() == 1);
  return {treated.select(data.y, ym), treated.select(ym, data.y)};
}

double log_complete_likelihood(const ParamVector& p, const CompleteOutcomes& outcomes,
                               const Eigen::Ref<const Eigen::VectorXd>& l) {
  const Eigen::Index n = l.size();
  const auto z1 = (outcomes.y1.array() - p.beta01 - p.beta11 * l.array()) / p.sigma1;
  const auto z0 = (outcomes.y0.array() - p.beta00 - p.beta10 * l.array()) / p.sigma0;
  const double one_minus = 1.0 - p.rho * p.rho;
  const double quad = (z1.square() - 2.0 * p.rho * z1 * z0 + z0.square()).sum() / one_minus;
  const double zl = ((l.array() - p.eta) / p.tau).square().sum();
  const double nd = static_cast<double>(n);
  const double log2pi = std::log(2.0 * std::numbers::pi);
  const double outcome = -nd * (log2pi + std::log(p.sigma1) + std::log(p.sigma0) + 0.5 * std::log1p(-p.rho * p.rho)) -
                         0.5 * quad;
  const double covariate = -nd * (0.5 * log2pi + std::log(p.tau)) - 0.5 * zl;
  return outcome + covariate;
}

double log_joint_posterior(const ParamVector& p, const Eigen::Ref<const CounterfactualVector>& ym,
                           const ObservedData& data) {
  if (ym.size() != data.size()) throw std::invalid_argument("log_joint_posterior: length mismatch");
  const double prior = log_prior(p);
  if (!std::isfinite(prior)) return prior;
  return prior + log_complete_likelihood(p, assemble(data, ym), data.l);
}

}  // namespace causalpost
