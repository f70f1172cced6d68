#include "causalpost/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "causalpost/csv.hpp"

namespace causalpost {

double quantile_sorted(const Eigen::Ref<const Eigen::VectorXd>& sorted, double prob) {
  if (sorted.size() == 0) throw std::invalid_argument("quantile_sorted: empty input");
  if (prob <= 0) return sorted[0];
  if (prob >= 1) return sorted[sorted.size() - 1];
  const double h = static_cast<double>(sorted.size() - 1) * prob;
  const auto lo = static_cast<Eigen::Index>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted[lo];
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

Summary summarize(const Eigen::Ref<const Eigen::VectorXd>& values, double level) {
  if (values.size() < 2) throw std::invalid_argument("summarize: need at least 2 values");
  if (!(level > 0 && level < 1)) throw std::invalid_argument("summarize: level must lie in (0, 1)");
  Summary s;
  s.level = level;
  const double n = static_cast<double>(values.size());
  s.mean = values.mean();
  s.sd = std::sqrt((values.array() - s.mean).square().sum() / (n - 1));
  Eigen::VectorXd sorted = values;
  std::sort(sorted.begin(), sorted.end());
  s.lo = quantile_sorted(sorted, (1 - level) / 2);
  s.hi = quantile_sorted(sorted, (1 + level) / 2);
  return s;
}

EffectiveSampleSize ess(const Eigen::Ref<const Eigen::VectorXd>& values) {
  const Eigen::Index n = values.size();
  if (n < 10) throw std::invalid_argument("ess: need at least 10 draws");
  const Eigen::ArrayXd x = values.array() - values.mean();
  const double gamma0 = x.square().sum() / static_cast<double>(n);
  if (!(gamma0 > 0)) return {0.0, true};

  auto autocorr = [&](Eigen::Index lag) {
    if (lag >= n) return 0.0;
    return (x.head(n - lag) * x.tail(n - lag)).sum() / static_cast<double>(n) / gamma0;
  };
  // tau = -1 + 2 * sum of positive pair sums (rho_{2m} + rho_{2m+1}).
  double pair_total = 0.0;
  for (Eigen::Index m = 0; 2 * m < n; ++m) {
    const double pair = autocorr(2 * m) + autocorr(2 * m + 1);
    if (!(pair > 0)) break;
    pair_total += pair;
  }
  const double tau = -1.0 + 2.0 * pair_total;
  const double total = static_cast<double>(n);
  return {tau > 1.0 ? total / tau : total, false};
}

double rhat(const std::vector<Eigen::VectorXd>& chains) {
  if (chains.size() < 2) throw std::invalid_argument("rhat: need at least 2 chains");
  const Eigen::Index len = chains.front().size();
  for (const auto& c : chains) {
    if (c.size() != len) throw std::invalid_argument("rhat: chains must have equal lengths");
  }
  if (len < 10) throw std::invalid_argument("rhat: chains must have at least 10 draws");

  const Eigen::Index half = len / 2;
  std::vector<Eigen::VectorXd> halves;
  for (const auto& c : chains) {
    halves.emplace_back(c.head(half));
    halves.emplace_back(c.tail(half));
  }
  const double m = static_cast<double>(halves.size());
  const double h = static_cast<double>(half);
  Eigen::VectorXd means(halves.size());
  double within = 0.0;
  for (std::size_t j = 0; j < halves.size(); ++j) {
    means[static_cast<Eigen::Index>(j)] = halves[j].mean();
    within += (halves[j].array() - halves[j].mean()).square().sum() / (h - 1);
  }
  within /= m;
  const double between_over_n = (means.array() - means.mean()).square().sum() / m;
  if (!(within > 0)) return std::numeric_limits<double>::quiet_NaN();
  const double var_plus = (h - 1) / h * within + between_over_n;
  return std::sqrt(var_plus / within);
}

std::pair<double, double> binomial_band(int trials, double p, double alpha) {
  if (trials < 1) throw std::invalid_argument("binomial_band: trials must be >= 1");
  if (!(p > 0 && p < 1) || !(alpha > 0 && alpha < 1)) throw std::invalid_argument("binomial_band: bad p or alpha");
  std::vector<double> pmf(static_cast<std::size_t>(trials) + 1);
  for (int k = 0; k <= trials; ++k) {
    pmf[static_cast<std::size_t>(k)] =
        std::exp(std::lgamma(trials + 1.0) - std::lgamma(k + 1.0) - std::lgamma(trials - k + 1.0) +
                 k * std::log(p) + (trials - k) * std::log1p(-p));
  }
  // Largest lo with P(X < lo) <= alpha/2, smallest hi with P(X > hi) <= alpha/2.
  int lo = 0;
  double below = 0.0;
  while (lo < trials && below + pmf[static_cast<std::size_t>(lo)] <= alpha / 2) below += pmf[static_cast<std::size_t>(lo++)];
  int hi = trials;
  double above = 0.0;
  while (hi > 0 && above + pmf[static_cast<std::size_t>(hi)] <= alpha / 2) above += pmf[static_cast<std::size_t>(hi--)];
  return {static_cast<double>(lo) / trials, static_cast<double>(hi) / trials};
}

std::string_view to_string(TruthSource source) {
  return source == TruthSource::kPopulation ? "population" : "realized_sample";
}

void write_coverage(std::ostream& out, const std::vector<CoverageReport>& reports) {
  out << "kind,backend,truth_source,replicates,coverage,mean_width,mean_bias\n";
  for (const auto& r : reports) {
    out << r.estimand << ',' << to_string(r.backend) << ',' << to_string(r.truth) << ',' << r.replicates << ','
        << csv::format(r.coverage) << ',' << csv::format(r.mean_width) << ',' << csv::format(r.mean_bias) << '\n';
  }
}

void write_summaries(std::ostream& out, const std::vector<EstimandDraws>& estimands, double level) {
  out << "kind,backend,mean,sd,ci_lo,ci_hi\n";
  for (const auto& e : estimands) {
    const Summary s = summarize(e.values, level);
    out << e.kind_label() << ',' << to_string(e.backend) << ',' << csv::format(s.mean) << ',' << csv::format(s.sd)
        << ',' << csv::format(s.lo) << ',' << csv::format(s.hi) << '\n';
  }
}

}  // namespace causalpost
