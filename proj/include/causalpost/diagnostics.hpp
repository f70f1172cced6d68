#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "causalpost/dgp.hpp"
#include "causalpost/estimands.hpp"
#include "causalpost/rng.hpp"
#include "causalpost/sampler.hpp"

namespace causalpost {

/// Posterior mean, sd (denominator T - 1) and equal-tailed percentile interval.
struct Summary {
  double mean = 0;
  double sd = 0;
  double lo = 0;
  double hi = 0;
  double level = 0.95;

  double width() const { return hi - lo; }
  bool covers(double value) const { return lo <= value && value <= hi; }
};

/// Type-7 quantile (linear interpolation between order statistics) of sorted data.
double quantile_sorted(const Eigen::Ref<const Eigen::VectorXd>& sorted, double prob);

/// Requires T >= 2 and 0 < level < 1.
Summary summarize(const Eigen::Ref<const Eigen::VectorXd>& values, double level = 0.95);

struct EffectiveSampleSize {
  double value = 0;
  /// Set for a constant chain, for which value is defined as 0.
  bool degenerate = false;
};

/// Geyer's initial positive sequence estimator, capped at T. Requires T >= 10.
EffectiveSampleSize ess(const Eigen::Ref<const Eigen::VectorXd>& values);

/// Split-chain potential scale reduction. Each chain is cut into two halves;
/// the between-chain term uses the variance of half-chain means with
/// denominator equal to the number of halves, so duplicating a chain leaves
/// the statistic unchanged. Requires >= 2 chains of equal length >= 10.
double rhat(const std::vector<Eigen::VectorXd>& chains);

/// Equal-tailed exact binomial acceptance region for the number of successes
/// in `trials` Bernoulli(p) trials at significance `alpha`, as proportions.
std::pair<double, double> binomial_band(int trials, double p, double alpha);

enum class TruthSource { kPopulation, kRealizedSample };
std::string_view to_string(TruthSource source);

struct CoverageReport {
  std::string estimand;  // "sate", "pate", "cate:<l>", "ite:<i>"
  PateBackend backend = PateBackend::kNone;
  TruthSource truth = TruthSource::kPopulation;
  int replicates = 0;
  int covered = 0;
  double coverage = 0;  // covered / replicates
  double mean_width = 0;
  double mean_bias = 0;  // mean of (posterior mean - truth)
};

struct CoverageOptions {
  int pate_samples = kDefaultPateSamples;
  double cate_at = 0.0;
  Eigen::Index ite_subject = 0;
  /// Worker threads; replicates are independent and merged by replicate id.
  int threads = 1;
};

/// Repeated-sampling study. Replicate r draws its data, chain and estimands
/// from `rng.substream(r)`. Population estimands (PATE under every backend,
/// CATE) are scored against the DGP closed forms, sample estimands (SATE,
/// ITE) against the realized complete data; one extra SATE row scores the
/// same intervals against the population PATE.
std::vector<CoverageReport> coverage_study(const DgpConfig& dgp, const SamplerConfig& sampler, int replicates,
                                           double level, const Rng& rng, const CoverageOptions& options = {});

/// Columns kind,backend,truth_source,replicates,coverage,mean_width,mean_bias.
void write_coverage(std::ostream& out, const std::vector<CoverageReport>& reports);

/// Columns kind,backend,mean,sd,ci_lo,ci_hi.
void write_summaries(std::ostream& out, const std::vector<EstimandDraws>& estimands, double level = 0.95);

}  // namespace causalpost
