#include "causalpost/pitfalls.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "causalpost/csv.hpp"
#include "causalpost/estimands.hpp"

namespace causalpost {
namespace {

double sample_sd(const Eigen::VectorXd& v) {
  const double n = static_cast<double>(v.size());
  if (v.size() < 2) return 0.0;
  return std::sqrt((v.array() - v.mean()).square().sum() / (n - 1));
}

}  // namespace

std::string_view to_string(PitfallKind kind) {
  switch (kind) {
    case PitfallKind::kPpiPate: return "pitfall_ppi_pate";
    case PitfallKind::kPpiIte: return "pitfall_ppi_ite";
    case PitfallKind::kKeilStyle: return "pitfall_keil_style";
  }
  return "pitfall_unknown";
}

PitfallKind parse_pitfall(std::string_view name) {
  if (name == "ppi_pate") return PitfallKind::kPpiPate;
  if (name == "ppi_ite") return PitfallKind::kPpiIte;
  if (name == "keil" || name == "keil_style") return PitfallKind::kKeilStyle;
  throw std::invalid_argument("unknown pitfall '" + std::string(name) + "'");
}

double pitfall_ppi_pate_draw(const ParamVector& p, const ObservedData& data, Rng& rng, int budget) {
  if (data.size() == 0) throw std::invalid_argument("pitfall_ppi_pate_draw: empty data");
  double total = 0.0;
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    const double y1 = mc_conditional_mean(p, data.l[i], Arm::kTreated, budget, rng);
    const double y0 = mc_conditional_mean(p, data.l[i], Arm::kControl, budget, rng);
    total += y1 - y0;
  }
  return total / static_cast<double>(data.size());
}

double pitfall_ppi_ite_draw(const ParamVector& p, double l, Rng& rng, int budget) {
  const double y1 = mc_conditional_mean(p, l, Arm::kTreated, budget, rng);
  const double y0 = mc_conditional_mean(p, l, Arm::kControl, budget, rng);
  return y1 - y0;
}

double pitfall_keil_style_draw(const ParamVector& p, const ObservedData& data, int m, Rng& rng) {
  if (m < 1) throw std::invalid_argument("pitfall_keil_style_draw: m must be >= 1");
  if (data.size() == 0) throw std::invalid_argument("pitfall_keil_style_draw: empty data");
  const auto n = static_cast<std::uint64_t>(data.size());
  double total = 0.0;
  for (int k = 0; k < m; ++k) {
    const double l = data.l[static_cast<Eigen::Index>(rng.uniform_index(n))];
    const double y1 = normal_sample(p.mean(Arm::kTreated, l), p.sigma1, rng);
    const double y0 = normal_sample(p.mean(Arm::kControl, l), p.sigma0, rng);
    total += y1 - y0;
  }
  return total / m;
}

PitfallReport pitfall_report(const PosteriorDraws& chain, PitfallKind name, Rng& rng, const PitfallOptions& options) {
  PitfallReport report;
  report.name = name;
  const Eigen::Index t_count = chain.size();
  report.draws.resize(t_count);
  switch (name) {
    case PitfallKind::kPpiPate:
      for (Eigen::Index t = 0; t < t_count; ++t) {
        report.draws[t] = pitfall_ppi_pate_draw(chain.params[t], chain.data, rng, options.budget);
      }
      report.reference_draws = pate_ecdf(chain).values;
      break;
    case PitfallKind::kPpiIte: {
      if (options.subject < 0 || options.subject >= chain.subjects()) {
        throw std::out_of_range("pitfall_report: subject out of range");
      }
      const double l = chain.data.l[options.subject];
      for (Eigen::Index t = 0; t < t_count; ++t) {
        report.draws[t] = pitfall_ppi_ite_draw(chain.params[t], l, rng, options.budget);
      }
      report.reference_draws = cate_draws(chain, l).values;
      break;
    }
    case PitfallKind::kKeilStyle: {
      const int m = options.m > 0 ? options.m : static_cast<int>(chain.subjects());
      for (Eigen::Index t = 0; t < t_count; ++t) {
        report.draws[t] = pitfall_keil_style_draw(chain.params[t], chain.data, m, rng);
      }
      report.reference_draws = pate_ecdf(chain).values;
      break;
    }
  }
  report.sd_ratio = sample_sd(report.draws) / sample_sd(report.reference_draws);
  return report;
}

void write_pitfall_report(std::ostream& out, const PitfallReport& report) {
  out << "name,mean_pitfall,mean_reference,sd_pitfall,sd_reference,sd_ratio\n";
  out << to_string(report.name) << ',' << csv::format(report.draws.mean()) << ','
      << csv::format(report.reference_draws.mean()) << ',' << csv::format(sample_sd(report.draws)) << ','
      << csv::format(sample_sd(report.reference_draws)) << ',' << csv::format(report.sd_ratio) << '\n';
}

}  // namespace causalpost
