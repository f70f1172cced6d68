#include "causalpost/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <set>

#include "causalpost/csv.hpp"

namespace causalpost {
namespace {

using Setter = std::function<void(RunConfig&, std::string_view)>;

double as_double(std::string_view v) {
  try {
    return csv::parse_double(v, 0);
  } catch (const ParseError&) {
    throw ConfigError("'" + std::string(v) + "' is not a number");
  }
}

long as_integer(std::string_view v) {
  long out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw ConfigError("'" + std::string(v) + "' is not an integer");
  return out;
}

std::optional<double> as_optional(std::string_view v) {
  if (v == "none") return std::nullopt;
  return as_double(v);
}

bool as_bool(std::string_view v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("'" + std::string(v) + "' is not a boolean");
}

Setter real(double DgpConfig::*field) {
  return [field](RunConfig& c, std::string_view v) { c.dgp.*field = as_double(v); };
}

Setter step(Block b) {
  return [b](RunConfig& c, std::string_view v) { c.sampler.steps[static_cast<int>(b)] = as_double(v); };
}

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table{
      {"n", [](RunConfig& c, std::string_view v) { c.dgp.n = as_integer(v); }},
      {"eta", real(&DgpConfig::eta)},
      {"tau", real(&DgpConfig::tau)},
      {"gamma0", real(&DgpConfig::gamma0)},
      {"gamma1", real(&DgpConfig::gamma1)},
      {"beta01", real(&DgpConfig::beta01)},
      {"beta11", real(&DgpConfig::beta11)},
      {"beta00", real(&DgpConfig::beta00)},
      {"beta10", real(&DgpConfig::beta10)},
      {"sigma1", real(&DgpConfig::sigma1)},
      {"sigma0", real(&DgpConfig::sigma0)},
      {"rho_true", real(&DgpConfig::rho_true)},
      {"warmup", [](RunConfig& c, std::string_view v) { c.sampler.warmup = static_cast<int>(as_integer(v)); }},
      {"keep", [](RunConfig& c, std::string_view v) { c.sampler.keep = static_cast<int>(as_integer(v)); }},
      {"thin", [](RunConfig& c, std::string_view v) { c.sampler.thin = static_cast<int>(as_integer(v)); }},
      {"step_beta1", step(Block::kBeta1)},
      {"step_beta0", step(Block::kBeta0)},
      {"step_sigma1", step(Block::kSigma1)},
      {"step_sigma0", step(Block::kSigma0)},
      {"step_covariate", step(Block::kCovariate)},
      {"step_rho", step(Block::kRho)},
      {"adapt_target", [](RunConfig& c, std::string_view v) { c.sampler.adapt_target = as_double(v); }},
      {"adapt_target_2d", [](RunConfig& c, std::string_view v) { c.sampler.adapt_target_2d = as_double(v); }},
      {"init",
       [](RunConfig& c, std::string_view v) {
         if (v == "auto") {
           c.sampler.init.reset();
           return;
         }
         const auto parts = csv::split(v);
         if (parts.size() != ParamVector::kSize) throw ConfigError("init needs 'auto' or 9 comma-separated values");
         ParamVector::Vector vec;
         for (int k = 0; k < ParamVector::kSize; ++k) vec[k] = as_double(csv::trim(parts[static_cast<std::size_t>(k)]));
         c.sampler.init = ParamVector::from_vector(vec);
       }},
      {"imputation",
       [](RunConfig& c, std::string_view v) {
         if (v == "exact") {
           c.sampler.imputation = ImputationMethod::kExact;
         } else if (v == "metropolis") {
           c.sampler.imputation = ImputationMethod::kMetropolis;
         } else {
           throw ConfigError("imputation must be 'exact' or 'metropolis'");
         }
       }},
      {"imputation_step", [](RunConfig& c, std::string_view v) { c.sampler.imputation_step = as_double(v); }},
      {"fixed_rho", [](RunConfig& c, std::string_view v) { c.sampler.fixed_rho = as_optional(v); }},
      {"fixed_sigma1", [](RunConfig& c, std::string_view v) { c.sampler.fixed_sigma1 = as_optional(v); }},
      {"fixed_sigma0", [](RunConfig& c, std::string_view v) { c.sampler.fixed_sigma0 = as_optional(v); }},
      {"fix_slopes", [](RunConfig& c, std::string_view v) { c.sampler.fix_slopes = as_bool(v); }},
  };
  return table;
}

}  // namespace

RunConfig parse_config(std::istream& in) {
  RunConfig cfg;
  std::set<std::string, std::less<>> seen;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = csv::trim(line);
    if (line.empty()) continue;
    const auto where = "config line " + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + "expected 'key = value'");
    const std::string_view key = csv::trim(line.substr(0, eq));
    const std::string_view value = csv::trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError(where + "unknown key '" + std::string(key) + "'");
    if (!seen.insert(std::string(key)).second) throw ConfigError(where + "duplicate key '" + std::string(key) + "'");
    if (value.empty()) throw ConfigError(where + "missing value for '" + std::string(key) + "'");
    try {
      it->second(cfg, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + std::string(key) + ": " + e.what());
    }
  }
  try {
    cfg.dgp.validate();
    cfg.sampler.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  return parse_config(in);
}

}  // namespace causalpost
