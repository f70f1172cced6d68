#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "causalpost/dgp.hpp"
#include "causalpost/sampler.hpp"

namespace causalpost {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Union of the generator and sampler settings read from one file.
struct RunConfig {
  DgpConfig dgp;
  SamplerConfig sampler;
};

/// Flat `key = value` text; '#' starts a comment, blank lines are ignored.
/// Keys are the DgpConfig and SamplerConfig field names:
///
///   n eta tau gamma0 gamma1 beta01 beta11 beta00 beta10 sigma1 sigma0 rho_true
///   warmup keep thin adapt_target adapt_target_2d
///   step_beta1 step_beta0 step_sigma1 step_sigma0 step_covariate step_rho
///   init            auto | nine comma-separated values in ParamVector order
///   imputation      exact | metropolis
///   imputation_step fixed_rho fixed_sigma1 fixed_sigma0   (number or none)
///   fix_slopes      true | false
///
/// Unknown or repeated keys and unparsable values throw ConfigError.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace causalpost
