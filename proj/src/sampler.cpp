#include "causalpost/sampler.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <fstream>
#include <algorithm>
#include <cmath>
#include <future>
#include <istream>
#include <limits>
#include <ostream>
#include <string>
#include <tuple>

#include "causalpost/csv.hpp"

namespace causalpost {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Posterior density on the sampler's unconstrained coordinates: flat
/// priors on sigma and tau pick up Jacobians sigma and tau from the log
/// scale, and rho = 0.9 tanh(z) contributes 0.9 (1 - (rho / 0.9)^2).
double log_target(const ParamVector& p, const CompleteOutcomes& outcomes, const Eigen::VectorXd& l) {
  if (!std::isfinite(log_prior(p))) return kNegInf;
  const double r = p.rho / kRhoBound;
  const double jacobian = std::log(p.sigma1) + std::log(p.sigma0) + std::log(p.tau) + std::log1p(-r * r);
  return log_complete_likelihood(p, outcomes, l) + jacobian;
}

/// Data-dependent proposal geometry shared by every iteration of a chain.
class ProposalShape {
 public:
  explicit ProposalShape(const ObservedData& data) {
    const double n = static_cast<double>(data.size());
    Eigen::Matrix2d xtx;
    xtx << n, data.l.sum(), data.l.sum(), data.l.squaredNorm();
    Eigen::LLT<Eigen::Matrix2d> llt(xtx.inverse());
    if (llt.info() == Eigen::Success && xtx.determinant() > 1e-12 * n * n) {
      coef_ = llt.matrixL();
    } else {
      coef_ << 1.0 / std::sqrt(n), 0.0, 0.0, 0.0;
    }
    intercept_only_ = 1.0 / std::sqrt(n);
    const double mean = data.l.mean();
    const double var = n > 1 ? (data.l.array() - mean).square().sum() / (n - 1) : 1.0;
    covariate_location_ = (var > 0 ? std::sqrt(var) : 1.0) / std::sqrt(n);
    covariate_log_scale_ = 1.0 / std::sqrt(2.0 * n);
  }

  const Eigen::Matrix2d& coef() const { return coef_; }
  double intercept_only() const { return intercept_only_; }
  double covariate_location() const { return covariate_location_; }
  double covariate_log_scale() const { return covariate_log_scale_; }

 private:
  Eigen::Matrix2d coef_;
  double intercept_only_;
  double covariate_location_;
  double covariate_log_scale_;
};

ParamVector propose(Block block, const ParamVector& cur, const SamplerConfig& cfg, const StepSizes& steps,
                    const ProposalShape& shape, Rng& rng) {
  ParamVector next = cur;
  const double step = steps[static_cast<int>(block)];
  switch (block) {
    case Block::kBeta1:
    case Block::kBeta0: {
      const bool treated = block == Block::kBeta1;
      double& intercept = treated ? next.beta01 : next.beta00;
      double& slope = treated ? next.beta11 : next.beta10;
      const double scale = step * (treated ? cur.sigma1 : cur.sigma0);
      if (cfg.fix_slopes) {
        intercept += scale * shape.intercept_only() * rng.standard_normal();
      } else {
        const Eigen::Vector2d z(rng.standard_normal(), rng.standard_normal());
        const Eigen::Vector2d delta = scale * (shape.coef() * z);
        intercept += delta[0];
        slope += delta[1];
      }
      break;
    }
    case Block::kSigma1:
      next.sigma1 = cur.sigma1 * std::exp(step * rng.standard_normal());
      break;
    case Block::kSigma0:
      next.sigma0 = cur.sigma0 * std::exp(step * rng.standard_normal());
      break;
    case Block::kCovariate:
      next.eta = cur.eta + step * shape.covariate_location() * rng.standard_normal();
      next.tau = cur.tau * std::exp(step * shape.covariate_log_scale() * rng.standard_normal());
      break;
    case Block::kRho: {
      const double z = std::atanh(cur.rho / kRhoBound) + step * rng.standard_normal();
      next.rho = kRhoBound * std::tanh(z);
      break;
    }
  }
  return next;
}

/// Applies the point-mass overrides of the config to a parameter vector.
ParamVector apply_fixes(ParamVector p, const SamplerConfig& cfg) {
  if (cfg.fixed_rho) p.rho = *cfg.fixed_rho;
  if (cfg.fixed_sigma1) p.sigma1 = *cfg.fixed_sigma1;
  if (cfg.fixed_sigma0) p.sigma0 = *cfg.fixed_sigma0;
  if (cfg.fix_slopes) p.beta11 = p.beta10 = 0.0;
  return p;
}

ParamUpdate metropolis_pass(const CompleteOutcomes& outcomes, const ObservedData& data, const ParamVector& current,
                            const SamplerConfig& cfg, const StepSizes& steps, const ProposalShape& shape, Rng& rng) {
  ParamUpdate out{current, {}};
  double current_target = log_target(current, outcomes, data.l);
  for (int b = 0; b < kNumBlocks; ++b) {
    const auto block = static_cast<Block>(b);
    if (!cfg.block_active(block)) {
      out.accepted[b] = true;
      continue;
    }
    const ParamVector candidate = propose(block, out.params, cfg, steps, shape, rng);
    const double candidate_target = log_target(candidate, outcomes, data.l);
    const double log_ratio = candidate_target - current_target;
    // Draw unconditionally so the stream position does not depend on the ratio.
    const double u = rng.uniform();
    if (candidate_target > kNegInf && (log_ratio >= 0 || std::log(u) < log_ratio)) {
      out.params = candidate;
      current_target = candidate_target;
      out.accepted[b] = true;
    }
  }
  return out;
}

std::pair<double, double> ols(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const double xm = x.mean();
  const double ym = y.mean();
  const double sxx = (x.array() - xm).square().sum();
  if (!(sxx > 0)) return {ym, 0.0};
  const double slope = ((x.array() - xm) * (y.array() - ym)).sum() / sxx;
  return {ym - slope * xm, slope};
}

Eigen::VectorXd select_arm(const Eigen::VectorXd& v, const Eigen::VectorXi& a, int arm) {
  Eigen::VectorXd out(static_cast<Eigen::Index>((a.array() == arm).count()));
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (a[i] == arm) out[k++] = v[i];
  }
  return out;
}

CounterfactualVector conditional_means(const ParamVector& p, const ObservedData& data) {
  CounterfactualVector ym(data.size());
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    const Arm arm = data.a[i] == 1 ? Arm::kTreated : Arm::kControl;
    ym[i] = bvn_conditional(p.outcome_law(data.l[i]), arm, data.y[i]).mean;
  }
  return ym;
}

}  // namespace

void SamplerConfig::validate() const {
  if (warmup < 0) throw std::invalid_argument("SamplerConfig: warmup must be >= 0");
  if (keep < 1) throw std::invalid_argument("SamplerConfig: keep must be >= 1");
  if (thin < 1) throw std::invalid_argument("SamplerConfig: thin must be >= 1");
  for (double s : steps) {
    if (!(s > 0) || !std::isfinite(s)) throw std::invalid_argument("SamplerConfig: step sizes must be positive");
  }
  for (double t : {adapt_target, adapt_target_2d}) {
    if (!(t > 0.1 && t < 0.9)) throw std::invalid_argument("SamplerConfig: adapt targets must lie in (0.1, 0.9)");
  }
  if (!(imputation_step > 0)) throw std::invalid_argument("SamplerConfig: imputation_step must be positive");
  if (fixed_rho && !(std::abs(*fixed_rho) < kRhoBound)) {
    throw std::invalid_argument("SamplerConfig: fixed_rho must lie in (-0.9, 0.9)");
  }
  if ((fixed_sigma1 && !(*fixed_sigma1 > 0)) || (fixed_sigma0 && !(*fixed_sigma0 > 0))) {
    throw std::invalid_argument("SamplerConfig: fixed sigmas must be positive");
  }
  if (init && !init->in_support()) throw std::invalid_argument("SamplerConfig: init lies outside the prior support");
}

bool SamplerConfig::block_active(Block b) const {
  switch (b) {
    case Block::kSigma1: return !fixed_sigma1.has_value();
    case Block::kSigma0: return !fixed_sigma0.has_value();
    case Block::kRho: return !fixed_rho.has_value();
    default: return true;
  }
}

Eigen::MatrixXd PosteriorDraws::param_matrix() const {
  Eigen::MatrixXd m(size(), ParamVector::kSize);
  for (Eigen::Index t = 0; t < size(); ++t) m.row(t) = params[t].to_vector().transpose();
  return m;
}

CounterfactualVector impute_counterfactuals(const ParamVector& p, const ObservedData& data, Rng& rng) {
  CounterfactualVector ym(data.size());
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    const Arm arm = data.a[i] == 1 ? Arm::kTreated : Arm::kControl;
    const ConditionalNormal c = bvn_conditional(p.outcome_law(data.l[i]), arm, data.y[i]);
    ym[i] = normal_sample(c.mean, c.sd, rng);
  }
  return ym;
}

CounterfactualVector impute_counterfactuals_metropolis(const ParamVector& p, const ObservedData& data,
                                                       const Eigen::Ref<const CounterfactualVector>& current,
                                                       double step, Rng& rng) {
  if (current.size() != data.size()) throw std::invalid_argument("impute_counterfactuals_metropolis: length mismatch");
  CounterfactualVector ym = current;
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    const ObservedRecord rec = data[i];
    const BvnParams law = p.outcome_law(rec.l);
    const Arm missing = rec.a == 1 ? Arm::kControl : Arm::kTreated;
    const double proposal = ym[i] + step * law.sd(missing) * rng.standard_normal();
    const auto [y1_new, y0_new] = assemble_pair(rec, proposal);
    const auto [y1_old, y0_old] = assemble_pair(rec, ym[i]);
    const double log_ratio = bvn_logpdf(law, y1_new, y0_new) - bvn_logpdf(law, y1_old, y0_old);
    const double u = rng.uniform();
    if (log_ratio >= 0 || std::log(u) < log_ratio) ym[i] = proposal;
  }
  return ym;
}

ParamUpdate update_params(const Eigen::Ref<const CounterfactualVector>& ym, const ObservedData& data,
                          const ParamVector& current, const SamplerConfig& cfg, Rng& rng) {
  if (ym.size() != data.size()) throw std::invalid_argument("update_params: length mismatch");
  const ProposalShape shape(data);
  return metropolis_pass(assemble(data, ym), data, current, cfg, cfg.steps, shape, rng);
}

ParamVector init_auto(const ObservedData& data, Rng& /*rng*/) {
  const Eigen::Index n1 = data.treated_count();
  const Eigen::Index n0 = data.size() - n1;
  if (n1 < 2 || n0 < 2) {
    throw InitializationError("automatic initialization needs >= 2 subjects per arm (treated " + std::to_string(n1) +
                              ", control " + std::to_string(n0) + "); supply an explicit init");
  }
  ParamVector p;
  auto fit_arm = [&](int arm, double& intercept, double& slope, double& sigma) {
    const Eigen::VectorXd l = select_arm(data.l, data.a, arm);
    const Eigen::VectorXd y = select_arm(data.y, data.a, arm);
    std::tie(intercept, slope) = ols(l, y);
    const double rss = (y.array() - intercept - slope * l.array()).square().sum();
    const double dof = std::max<double>(static_cast<double>(y.size()) - 2.0, 1.0);
    sigma = std::max(std::sqrt(rss / dof), 1e-8);
  };
  fit_arm(1, p.beta01, p.beta11, p.sigma1);
  fit_arm(0, p.beta00, p.beta10, p.sigma0);
  const double n = static_cast<double>(data.size());
  p.eta = data.l.mean();
  p.tau = std::max(std::sqrt((data.l.array() - p.eta).square().sum() / (n - 1)), 1e-8);
  p.rho = 0.0;
  return p;
}

PosteriorDraws run_chain(const ObservedData& data, const SamplerConfig& cfg, Rng& rng) {
  cfg.validate();
  if (data.size() < 2) throw std::invalid_argument("run_chain: need at least 2 subjects");

  const bool automatic = !cfg.init.has_value();
  ParamVector params = apply_fixes(automatic ? init_auto(data, rng) : *cfg.init, cfg);
  CounterfactualVector ym;
  constexpr int kInitRetries = 20;
  for (int attempt = 0;; ++attempt) {
    if (params.in_support()) {
      ym = conditional_means(params, data);
      if (std::isfinite(log_joint_posterior(params, ym, data))) break;
    }
    if (!automatic || attempt == kInitRetries) {
      throw InitializationError("log posterior is not finite at the initial point");
    }
    ParamVector jittered = params;
    jittered.eta += 0.1 * rng.standard_normal();
    jittered.tau = std::max(jittered.tau, 1e-3) * std::exp(0.1 * rng.standard_normal());
    jittered.sigma1 = std::max(jittered.sigma1, 1e-3) * std::exp(0.1 * rng.standard_normal());
    jittered.sigma0 = std::max(jittered.sigma0, 1e-3) * std::exp(0.1 * rng.standard_normal());
    jittered.rho = 0.0;
    params = apply_fixes(jittered, cfg);
  }

  const ProposalShape shape(data);
  StepSizes steps = cfg.steps;
  std::array<double, kNumBlocks> targets{};
  for (int b = 0; b < kNumBlocks; ++b) {
    const bool two_d = kBlockDims[b] == 2 && !(cfg.fix_slopes && b <= static_cast<int>(Block::kBeta0));
    targets[b] = two_d ? cfg.adapt_target_2d : cfg.adapt_target;
  }

  PosteriorDraws out;
  out.data = data;
  out.params.reserve(static_cast<std::size_t>(cfg.keep));
  out.counterfactuals.resize(data.size(), cfg.keep);
  std::array<long, kNumBlocks> accepted{};

  const long total = static_cast<long>(cfg.warmup) + static_cast<long>(cfg.keep) * cfg.thin;
  for (long it = 0; it < total; ++it) {
    ym = cfg.imputation == ImputationMethod::kExact
             ? impute_counterfactuals(params, data, rng)
             : impute_counterfactuals_metropolis(params, data, ym, cfg.imputation_step, rng);
    const ParamUpdate update = metropolis_pass(assemble(data, ym), data, params, cfg, steps, shape, rng);
    params = update.params;

    if (it < cfg.warmup) {
      // Robbins-Monro on log step size.
      const double gain = std::pow(static_cast<double>(it) + 1.0, -0.6);
      for (int b = 0; b < kNumBlocks; ++b) {
        if (!cfg.block_active(static_cast<Block>(b))) continue;
        const double log_step = std::log(steps[b]) + gain * ((update.accepted[b] ? 1.0 : 0.0) - targets[b]);
        steps[b] = std::exp(std::clamp(log_step, -20.0, 5.0));
      }
      continue;
    }
    for (int b = 0; b < kNumBlocks; ++b) accepted[b] += update.accepted[b] ? 1 : 0;
    const long post = it - cfg.warmup + 1;
    if (post % cfg.thin == 0) {
      out.counterfactuals.col(static_cast<Eigen::Index>(out.params.size())) = ym;
      out.params.push_back(params);
    }
  }

  const double post_iters = static_cast<double>(cfg.keep) * cfg.thin;
  for (int b = 0; b < kNumBlocks; ++b) {
    out.acceptance[b] = cfg.block_active(static_cast<Block>(b)) ? static_cast<double>(accepted[b]) / post_iters
                                                                : std::numeric_limits<double>::quiet_NaN();
  }
  out.steps = steps;
  return out;
}

std::vector<PosteriorDraws> run_chains(const ObservedData& data, const SamplerConfig& cfg, std::uint64_t seed,
                                       int chains) {
  if (chains < 1) throw std::invalid_argument("run_chains: need at least one chain");
  std::vector<std::future<PosteriorDraws>> futures;
  for (int c = 0; c < chains; ++c) {
    futures.push_back(std::async(std::launch::async, [&data, &cfg, seed, c] {
      Rng rng(seed, static_cast<std::uint64_t>(c));
      return run_chain(data, cfg, rng);
    }));
  }
  std::vector<PosteriorDraws> out;
  for (auto& f : futures) out.push_back(f.get());
  return out;
}

void write_draws(std::ostream& out, const PosteriorDraws& draws) {
  for (int k = 0; k < ParamVector::kSize; ++k) out << (k ? "," : "") << ParamVector::kNames[k];
  for (Eigen::Index i = 0; i < draws.subjects(); ++i) out << ",ym_" << (i + 1);
  out << '\n';
  for (Eigen::Index t = 0; t < draws.size(); ++t) {
    const auto v = draws.params[t].to_vector();
    for (int k = 0; k < ParamVector::kSize; ++k) out << (k ? "," : "") << csv::format(v[k]);
    for (Eigen::Index i = 0; i < draws.subjects(); ++i) out << ',' << csv::format(draws.counterfactuals(i, t));
    out << '\n';
  }
}

PosteriorDraws read_draws(std::istream& in, const ObservedData& data) {
  std::string header;
  for (int k = 0; k < ParamVector::kSize; ++k) header += (k ? "," : "") + std::string(ParamVector::kNames[k]);
  for (Eigen::Index i = 0; i < data.size(); ++i) header += ",ym_" + std::to_string(i + 1);

  csv::Reader reader(in);
  csv::expect_header(reader, header);
  PosteriorDraws out;
  out.data = data;
  out.acceptance.fill(std::numeric_limits<double>::quiet_NaN());
  out.steps.fill(std::numeric_limits<double>::quiet_NaN());
  std::vector<Eigen::VectorXd> columns;
  const auto width = static_cast<std::size_t>(ParamVector::kSize + data.size());
  std::string line;
  while (reader.next(line)) {
    const auto ln = reader.line_number();
    const auto fields = csv::split(line);
    if (fields.size() != width) {
      throw ParseError("line " + std::to_string(ln) + ": expected " + std::to_string(width) + " fields", ln);
    }
    ParamVector::Vector v;
    for (int k = 0; k < ParamVector::kSize; ++k) v[k] = csv::parse_double(fields[k], ln);
    const ParamVector p = ParamVector::from_vector(v);
    if (!p.in_support()) throw ValidationError("line " + std::to_string(ln) + ": parameters outside support", ln);
    Eigen::VectorXd ym(data.size());
    for (Eigen::Index i = 0; i < data.size(); ++i) {
      ym[i] = csv::parse_double(fields[static_cast<std::size_t>(ParamVector::kSize + i)], ln);
    }
    out.params.push_back(p);
    columns.push_back(std::move(ym));
  }
  out.counterfactuals.resize(data.size(), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t t = 0; t < columns.size(); ++t) out.counterfactuals.col(static_cast<Eigen::Index>(t)) = columns[t];
  return out;
}

PosteriorDraws load_draws(const std::filesystem::path& path, const ObservedData& data) {
  auto in = csv::open_input(path);
  return read_draws(in, data);
}

}  // namespace causalpost
