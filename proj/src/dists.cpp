#include "causalpost/dists.hpp"

namespace causalpost {

void validate(const BvnParams& p) {
  if (!(p.sigma1 > 0) || !(p.sigma0 > 0)) throw std::invalid_argument("BvnParams: sds must be positive");
  if (!(std::abs(p.rho) <= 1)) throw std::invalid_argument("BvnParams: |rho| must be <= 1");
}

double normal_sample(double mean, double sd, Rng& rng) {
  if (!(sd >= 0)) throw std::invalid_argument("normal_sample: sd must be nonnegative");
  if (sd == 0) return mean;
  return mean + sd * rng.standard_normal();
}

int bernoulli_expit(double linear, Rng& rng) { return rng.uniform() < expit(linear) ? 1 : 0; }

Eigen::VectorXd normalize_to_simplex(const Eigen::Ref<const Eigen::VectorXd>& raw) {
  if (raw.size() == 0) throw std::invalid_argument("normalize_to_simplex: empty input");
  if ((raw.array() < 0).any()) throw std::invalid_argument("normalize_to_simplex: negative weight");
  const double total = raw.sum();
  if (!(total > 0)) throw std::invalid_argument("normalize_to_simplex: weights sum to zero");
  return raw / total;
}

Eigen::VectorXd dirichlet_ones(Eigen::Index n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("dirichlet_ones: n must be >= 1");
  Eigen::VectorXd raw(n);
  for (Eigen::Index i = 0; i < n; ++i) raw[i] = rng.standard_exponential();
  return normalize_to_simplex(raw);
}

}  // namespace causalpost
