#pragma once

#include <Eigen/Core>
#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "causalpost/dgp.hpp"
#include "causalpost/model.hpp"
#include "causalpost/rng.hpp"

namespace causalpost {

/// Starting point could not be made to have finite log posterior.
class InitializationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Metropolis blocks, updated in this order every iteration.
enum class Block : int { kBeta1 = 0, kBeta0, kSigma1, kSigma0, kCovariate, kRho };
inline constexpr int kNumBlocks = 6;
inline constexpr std::array<std::string_view, kNumBlocks> kBlockNames{"beta1", "beta0",     "sigma1",
                                                                      "sigma0", "covariate", "rho"};

/// Number of coordinates each block proposes jointly (before fixes apply).
inline constexpr std::array<int, kNumBlocks> kBlockDims{2, 2, 1, 1, 2, 1};

enum class ImputationMethod { kExact, kMetropolis };

using StepSizes = std::array<double, kNumBlocks>;

struct SamplerConfig {
  int warmup = 5000;
  int keep = 5000;
  int thin = 1;
  /// Random-walk scales. Coefficient blocks are scaled by the arm's sigma and
  /// shaped by chol((X'X)^-1); scales, rho and the covariate block move on
  /// unconstrained coordinates (log sigma, log tau, atanh(rho / 0.9)).
  StepSizes steps{1.7, 1.7, 0.3, 0.3, 1.7, 0.5};
  /// Acceptance target for scalar blocks during warmup adaptation.
  double adapt_target = 0.44;
  /// Acceptance target for two-dimensional blocks.
  double adapt_target_2d = 0.35;
  /// nullopt selects init_auto.
  std::optional<ParamVector> init;

  ImputationMethod imputation = ImputationMethod::kExact;
  /// Proposal scale of the Metropolis imputation, in units of the missing arm's sigma.
  double imputation_step = 2.0;

  /// Point-mass overrides used for sensitivity runs and reduced models.
  std::optional<double> fixed_rho;
  std::optional<double> fixed_sigma1;
  std::optional<double> fixed_sigma0;
  /// Holds beta11 = beta10 = 0 (intercept-only outcome means).
  bool fix_slopes = false;

  void validate() const;
  bool block_active(Block b) const;
};

/// Retained draws of (parameters, counterfactuals) from one chain.
struct PosteriorDraws {
  std::vector<ParamVector> params;
  /// n x T; column t holds the counterfactual vector of draw t.
  Eigen::MatrixXd counterfactuals;
  /// Post-warmup acceptance rate per block, NaN for blocks held fixed.
  std::array<double, kNumBlocks> acceptance{};
  /// Step sizes after warmup adaptation (constant for every retained draw).
  StepSizes steps{};
  ObservedData data;

  Eigen::Index size() const { return static_cast<Eigen::Index>(params.size()); }
  Eigen::Index subjects() const { return data.size(); }
  auto counterfactual(Eigen::Index t) const { return counterfactuals.col(t); }
  /// One column per parameter, one row per draw.
  Eigen::MatrixXd param_matrix() const;
};

/// Exact draw of every missing arm from its bivariate-normal conditional.
CounterfactualVector impute_counterfactuals(const ParamVector& p, const ObservedData& data, Rng& rng);

/// One symmetric random-walk Metropolis sweep over the counterfactuals,
/// targeting the same conditionals through the joint density ratio.
CounterfactualVector impute_counterfactuals_metropolis(const ParamVector& p, const ObservedData& data,
                                                       const Eigen::Ref<const CounterfactualVector>& current,
                                                       double step, Rng& rng);

struct ParamUpdate {
  ParamVector params;
  std::array<bool, kNumBlocks> accepted{};
};

/// One blockwise random-walk Metropolis pass, one accept/reject per block.
/// Fixed blocks are skipped and report accepted = true.
ParamUpdate update_params(const Eigen::Ref<const CounterfactualVector>& ym, const ObservedData& data,
                          const ParamVector& current, const SamplerConfig& cfg, Rng& rng);

/// Per-arm least squares for the outcome blocks, sample moments for (eta, tau), rho = 0.
ParamVector init_auto(const ObservedData& data, Rng& rng);

/// Metropolis-in-Gibbs: impute counterfactuals, then update parameters.
PosteriorDraws run_chain(const ObservedData& data, const SamplerConfig& cfg, Rng& rng);

/// Independent chains on streams (seed, 0), (seed, 1), ... run concurrently.
std::vector<PosteriorDraws> run_chains(const ObservedData& data, const SamplerConfig& cfg, std::uint64_t seed,
                                       int chains);

/// Columns: parameter names, then ym_1..ym_n. One row per retained draw.
void write_draws(std::ostream& out, const PosteriorDraws& draws);
PosteriorDraws read_draws(std::istream& in, const ObservedData& data);
PosteriorDraws load_draws(const std::filesystem::path& path, const ObservedData& data);

}  // namespace causalpost
