#include <algorithm>
#include <future>
#include <stdexcept>

#include "causalpost/csv.hpp"
#include "causalpost/diagnostics.hpp"

namespace causalpost {
namespace {

struct Row {
  std::string estimand;
  PateBackend backend;
  TruthSource truth;
};

struct Scored {
  bool covered;
  double width;
  double bias;
};

Scored score(const Summary& s, double truth) { return {s.covers(truth), s.width(), s.mean - truth}; }

std::vector<Row> layout(const CoverageOptions& options) {
  const std::string cate = "cate:" + csv::format(options.cate_at);
  const std::string ite = "ite:" + std::to_string(options.ite_subject);
  return {
      {"sate", PateBackend::kNone, TruthSource::kRealizedSample},
      {"sate", PateBackend::kNone, TruthSource::kPopulation},
      {"pate", PateBackend::kClosedForm, TruthSource::kPopulation},
      {"pate", PateBackend::kParametricMc, TruthSource::kPopulation},
      {"pate", PateBackend::kBayesianBootstrap, TruthSource::kPopulation},
      {"pate", PateBackend::kEmpirical, TruthSource::kPopulation},
      {cate, PateBackend::kNone, TruthSource::kPopulation},
      {ite, PateBackend::kNone, TruthSource::kRealizedSample},
  };
}

/// Scores one replicate in the order given by layout().
std::vector<Scored> run_replicate(const DgpConfig& dgp, const SamplerConfig& sampler, double level, Rng rng,
                                  const CoverageOptions& options) {
  const CompleteData complete = generate_complete(dgp, rng);
  const TruthRecord truth = true_estimands(complete, dgp);
  const ObservedData observed = mask(complete);
  const PosteriorDraws chain = run_chain(observed, sampler, rng);

  const Summary sate = summarize(sate_draws(chain).values, level);
  const double cate_truth = truth.cate_intercept + truth.cate_slope * options.cate_at;
  return {
      score(sate, truth.sate),
      score(sate, truth.pate),
      score(summarize(pate_closed(chain).values, level), truth.pate),
      score(summarize(pate_mc(chain, options.pate_samples, rng).values, level), truth.pate),
      score(summarize(pate_bb(chain, rng).values, level), truth.pate),
      score(summarize(pate_ecdf(chain).values, level), truth.pate),
      score(summarize(cate_draws(chain, options.cate_at).values, level), cate_truth),
      score(summarize(ite_draws(chain, options.ite_subject).values, level), truth.ites[options.ite_subject]),
  };
}

}  // namespace

std::vector<CoverageReport> coverage_study(const DgpConfig& dgp, const SamplerConfig& sampler, int replicates,
                                           double level, const Rng& rng, const CoverageOptions& options) {
  if (replicates < 1) throw std::invalid_argument("coverage_study: need at least one replicate");
  if (!(level > 0 && level < 1)) throw std::invalid_argument("coverage_study: level must lie in (0, 1)");
  if (options.ite_subject < 0 || options.ite_subject >= dgp.n) {
    throw std::invalid_argument("coverage_study: ITE subject out of range");
  }
  dgp.validate();
  sampler.validate();

  std::vector<std::vector<Scored>> results(static_cast<std::size_t>(replicates));
  const int workers = std::clamp(options.threads, 1, replicates);
  std::vector<std::future<void>> futures;
  for (int w = 0; w < workers; ++w) {
    futures.push_back(std::async(std::launch::async, [&, w] {
      for (int r = w; r < replicates; r += workers) {
        results[static_cast<std::size_t>(r)] =
            run_replicate(dgp, sampler, level, rng.substream(static_cast<std::uint64_t>(r)), options);
      }
    }));
  }
  for (auto& f : futures) f.get();

  const auto rows = layout(options);
  std::vector<CoverageReport> reports;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CoverageReport rep;
    rep.estimand = rows[k].estimand;
    rep.backend = rows[k].backend;
    rep.truth = rows[k].truth;
    rep.replicates = replicates;
    double width = 0.0;
    double bias = 0.0;
    for (const auto& res : results) {
      rep.covered += res[k].covered ? 1 : 0;
      width += res[k].width;
      bias += res[k].bias;
    }
    rep.coverage = static_cast<double>(rep.covered) / replicates;
    rep.mean_width = width / replicates;
    rep.mean_bias = bias / replicates;
    reports.push_back(rep);
  }
  return reports;
}

}  // namespace causalpost
