#include "causalpost/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <ostream>
#include <string>

#include "causalpost/config.hpp"
#include "causalpost/csv.hpp"
#include "causalpost/dgp.hpp"
#include "causalpost/diagnostics.hpp"
#include "causalpost/estimands.hpp"
#include "causalpost/pitfalls.hpp"
#include "causalpost/sampler.hpp"

namespace causalpost {
namespace {

struct SimulateArgs {
  std::string config, out_observed, out_complete, out_truth;
  std::uint64_t seed = 0;
};

struct FitArgs {
  std::string data, config, out_draws;
  std::uint64_t seed = 0;
};

struct EstimateArgs {
  std::string draws, data, which, out, summary;
  int samples = kDefaultPateSamples;
  std::uint64_t seed = 0;
  double level = 0.95;
};

struct PitfallArgs {
  std::string draws, data, name, out;
  bool acknowledged = false;
  std::uint64_t seed = 0;
  long subject = 0;
  int m = 0;
  int budget = 1;
};

struct CoverageArgs {
  std::string config, out;
  int replicates = 200;
  double level = 0.95;
  std::uint64_t seed = 0;
  int threads = 1;
  int samples = kDefaultPateSamples;
};

void simulate(const SimulateArgs& a) {
  const RunConfig cfg = load_config(a.config);
  Rng rng(a.seed, 0);
  const CompleteData complete = generate_complete(cfg.dgp, rng);
  auto obs = csv::open_output(a.out_observed);
  write_observed(obs, mask(complete));
  auto comp = csv::open_output(a.out_complete);
  write_complete(comp, complete);
  auto truth = csv::open_output(a.out_truth);
  write_truth(truth, true_estimands(complete, cfg.dgp));
}

void fit(const FitArgs& a) {
  const RunConfig cfg = load_config(a.config);
  const ObservedData data = load_observed(a.data);
  Rng rng(a.seed, 0);
  const PosteriorDraws draws = run_chain(data, cfg.sampler, rng);
  auto out = csv::open_output(a.out_draws);
  write_draws(out, draws);
}

void estimate(const EstimateArgs& a) {
  const ObservedData data = load_observed(a.data);
  const PosteriorDraws chain = load_draws(a.draws, data);
  Rng rng(a.seed, 0);
  const EstimandDraws e = evaluate_estimand(chain, a.which, a.samples, rng);
  auto out = csv::open_output(a.out);
  write_estimand_draws(out, {e});
  if (!a.summary.empty()) {
    auto sum = csv::open_output(a.summary);
    write_summaries(sum, {e}, a.level);
  }
}

void pitfalls(const PitfallArgs& a) {
  if (!a.acknowledged) {
    throw std::invalid_argument("pitfall procedures are incorrect by construction; pass --i-know-this-is-wrong");
  }
  const PitfallKind kind = parse_pitfall(a.name);
  const ObservedData data = load_observed(a.data);
  const PosteriorDraws chain = load_draws(a.draws, data);
  Rng rng(a.seed, 0);
  const PitfallReport report = pitfall_report(chain, kind, rng, {a.subject, a.m, a.budget});
  auto out = csv::open_output(a.out);
  write_pitfall_report(out, report);
}

void coverage(const CoverageArgs& a) {
  const RunConfig cfg = load_config(a.config);
  CoverageOptions options;
  options.threads = a.threads;
  options.pate_samples = a.samples;
  const auto reports = coverage_study(cfg.dgp, cfg.sampler, a.replicates, a.level, Rng(a.seed, 0), options);
  auto out = csv::open_output(a.out);
  write_coverage(out, reports);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bayesian sample- and population-level causal estimands"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Generate complete and observed data plus ground truth");
  sim_cmd->add_option("--config", sim.config, "key = value config file")->required();
  sim_cmd->add_option("--seed", sim.seed, "RNG seed")->required();
  sim_cmd->add_option("--out-observed", sim.out_observed)->required();
  sim_cmd->add_option("--out-complete", sim.out_complete)->required();
  sim_cmd->add_option("--out-truth", sim.out_truth)->required();

  FitArgs fitargs;
  auto* fit_cmd = app.add_subcommand("fit", "Run the Metropolis-in-Gibbs sampler on observed data");
  fit_cmd->add_option("--data", fitargs.data, "observed y,a,l file")->required();
  fit_cmd->add_option("--config", fitargs.config)->required();
  fit_cmd->add_option("--seed", fitargs.seed)->required();
  fit_cmd->add_option("--out-draws", fitargs.out_draws)->required();

  EstimateArgs est;
  auto* est_cmd = app.add_subcommand("estimate", "Extract estimand draws from a fitted chain");
  est_cmd->add_option("--draws", est.draws)->required();
  est_cmd->add_option("--data", est.data)->required();
  est_cmd->add_option("--which", est.which, "ite:<i> | sate | cate:<l> | pate:<backend>")->required();
  est_cmd->add_option("--S", est.samples, "Monte Carlo size for pate:parametric_mc")->check(CLI::PositiveNumber);
  est_cmd->add_option("--seed", est.seed, "RNG seed for stochastic backends");
  est_cmd->add_option("--out", est.out)->required();
  est_cmd->add_option("--summary", est.summary, "also write kind,backend,mean,sd,ci_lo,ci_hi");
  est_cmd->add_option("--level", est.level, "credible level for --summary");

  PitfallArgs pit;
  auto* pit_cmd = app.add_subcommand("pitfalls", "Reproduce an incorrect procedure next to its correct counterpart");
  pit_cmd->add_option("--draws", pit.draws)->required();
  pit_cmd->add_option("--data", pit.data)->required();
  pit_cmd->add_option("--name", pit.name, "ppi_pate | ppi_ite | keil")->required();
  pit_cmd->add_flag("--i-know-this-is-wrong", pit.acknowledged);
  pit_cmd->add_option("--out", pit.out)->required();
  pit_cmd->add_option("--seed", pit.seed);
  pit_cmd->add_option("--subject", pit.subject, "0-based subject for ppi_ite");
  pit_cmd->add_option("--m", pit.m, "resample size for keil (default n)");
  pit_cmd->add_option("--budget", pit.budget, "simulations per arm for ppi_pate/ppi_ite")->check(CLI::PositiveNumber);

  CoverageArgs cov;
  auto* cov_cmd = app.add_subcommand("coverage", "Repeated-sampling coverage study");
  cov_cmd->add_option("--config", cov.config)->required();
  cov_cmd->add_option("--replicates", cov.replicates)->required()->check(CLI::PositiveNumber);
  cov_cmd->add_option("--level", cov.level)->required();
  cov_cmd->add_option("--seed", cov.seed)->required();
  cov_cmd->add_option("--out", cov.out)->required();
  cov_cmd->add_option("--threads", cov.threads)->check(CLI::PositiveNumber);
  cov_cmd->add_option("--S", cov.samples)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*sim_cmd) simulate(sim);
    if (*fit_cmd) fit(fitargs);
    if (*est_cmd) estimate(est);
    if (*pit_cmd) pitfalls(pit);
    if (*cov_cmd) coverage(cov);
  } catch (const std::exception& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "causalpost: error: " << msg << '\n';
    return 1;
  }
  return 0;
}

}  // namespace causalpost
