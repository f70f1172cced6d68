#include "causalpost/estimands.hpp"

#include <ostream>
#include <stdexcept>

#include "causalpost/csv.hpp"
#include "causalpost/dists.hpp"

namespace causalpost {
namespace {

EstimandDraws make(EstimandKind kind, PateBackend backend, Eigen::Index t) {
  EstimandDraws e;
  e.kind = kind;
  e.backend = backend;
  e.values.resize(t);
  return e;
}

}  // namespace

std::string_view to_string(PateBackend backend) {
  switch (backend) {
    case PateBackend::kParametricMc: return "parametric_mc";
    case PateBackend::kBayesianBootstrap: return "bayesian_bootstrap";
    case PateBackend::kEmpirical: return "empirical";
    case PateBackend::kClosedForm: return "closed_form";
    case PateBackend::kNone: break;
  }
  return "none";
}

PateBackend parse_backend(std::string_view name) {
  if (name == "parametric_mc" || name == "mc") return PateBackend::kParametricMc;
  if (name == "bayesian_bootstrap" || name == "bb") return PateBackend::kBayesianBootstrap;
  if (name == "empirical" || name == "ecdf") return PateBackend::kEmpirical;
  if (name == "closed_form" || name == "closed") return PateBackend::kClosedForm;
  throw std::invalid_argument("unknown PATE backend '" + std::string(name) + "'");
}

std::string EstimandDraws::kind_label() const {
  switch (kind) {
    case EstimandKind::kIte: return "ite:" + std::to_string(subject);
    case EstimandKind::kSate: return "sate";
    case EstimandKind::kCate: return "cate:" + csv::format(at);
    case EstimandKind::kPate: return "pate";
  }
  return "unknown";
}

EstimandDraws ite_draws(const PosteriorDraws& chain, Eigen::Index subject) {
  if (subject < 0 || subject >= chain.subjects()) {
    throw std::out_of_range("ite_draws: subject " + std::to_string(subject) + " out of range");
  }
  EstimandDraws e = make(EstimandKind::kIte, PateBackend::kNone, chain.size());
  e.subject = subject;
  const double y = chain.data.y[subject];
  const auto ym = chain.counterfactuals.row(subject).transpose();
  if (chain.data.a[subject] == 1) {
    e.values = (y - ym.array()).matrix();
  } else {
    e.values = (ym.array() - y).matrix();
  }
  return e;
}

EstimandDraws sate_draws(const PosteriorDraws& chain) {
  EstimandDraws e = make(EstimandKind::kSate, PateBackend::kNone, chain.size());
  const ObservedData& d = chain.data;
  const double n = static_cast<double>(d.size());
  for (Eigen::Index t = 0; t < chain.size(); ++t) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < d.size(); ++i) {
      const double ym = chain.counterfactuals(i, t);
      total += d.a[i] == 1 ? d.y[i] - ym : ym - d.y[i];
    }
    e.values[t] = total / n;
  }
  return e;
}

EstimandDraws cate_draws(const PosteriorDraws& chain, double l) {
  EstimandDraws e = make(EstimandKind::kCate, PateBackend::kNone, chain.size());
  e.at = l;
  for (Eigen::Index t = 0; t < chain.size(); ++t) e.values[t] = chain.params[t].cate(l);
  return e;
}

EstimandDraws pate_closed(const PosteriorDraws& chain) {
  EstimandDraws e = make(EstimandKind::kPate, PateBackend::kClosedForm, chain.size());
  for (Eigen::Index t = 0; t < chain.size(); ++t) e.values[t] = chain.params[t].cate(chain.params[t].eta);
  return e;
}

EstimandDraws pate_mc(const PosteriorDraws& chain, int samples, Rng& rng) {
  if (samples < 1) throw std::invalid_argument("pate_mc: S must be >= 1");
  EstimandDraws e = make(EstimandKind::kPate, PateBackend::kParametricMc, chain.size());
  e.mc_samples = samples;
  for (Eigen::Index t = 0; t < chain.size(); ++t) {
    const ParamVector& p = chain.params[t];
    if (p.tau == 0) {
      e.values[t] = p.cate(p.eta);
      continue;
    }
    double total = 0.0;
    for (int s = 0; s < samples; ++s) total += p.cate(normal_sample(p.eta, p.tau, rng));
    e.values[t] = total / samples;
  }
  return e;
}

double mc_conditional_mean(const ParamVector& p, double l, Arm arm, int draws, Rng& rng) {
  if (draws < 1) throw std::invalid_argument("mc_conditional_mean: B must be >= 1");
  const double mean = p.mean(arm, l);
  const double sd = p.sd(arm);
  if (sd == 0) return mean;
  double total = 0.0;
  for (int b = 0; b < draws; ++b) total += normal_sample(mean, sd, rng);
  return total / draws;
}

EstimandDraws pate_weighted(const PosteriorDraws& chain, const Eigen::Ref<const Eigen::MatrixXd>& weights) {
  if (weights.rows() != chain.size() || weights.cols() != chain.subjects()) {
    throw std::invalid_argument("pate_weighted: weights must be T x n");
  }
  EstimandDraws e = make(EstimandKind::kPate, PateBackend::kBayesianBootstrap, chain.size());
  const Eigen::VectorXd& l = chain.data.l;
  for (Eigen::Index t = 0; t < chain.size(); ++t) {
    const ParamVector& p = chain.params[t];
    double total = 0.0;
    for (Eigen::Index i = 0; i < l.size(); ++i) total += p.cate(l[i]) * weights(t, i);
    e.values[t] = total;
  }
  return e;
}

EstimandDraws pate_bb(const PosteriorDraws& chain, Rng& rng) {
  Eigen::MatrixXd weights(chain.size(), chain.subjects());
  for (Eigen::Index t = 0; t < chain.size(); ++t) weights.row(t) = dirichlet_ones(chain.subjects(), rng).transpose();
  return pate_weighted(chain, weights);
}

EstimandDraws pate_ecdf(const PosteriorDraws& chain) {
  const double w = 1.0 / static_cast<double>(chain.subjects());
  EstimandDraws e = pate_weighted(chain, Eigen::MatrixXd::Constant(chain.size(), chain.subjects(), w));
  e.backend = PateBackend::kEmpirical;
  return e;
}

EstimandDraws evaluate_estimand(const PosteriorDraws& chain, std::string_view which, int samples, Rng& rng) {
  const auto colon = which.find(':');
  const std::string_view head = which.substr(0, colon);
  const std::string_view arg = colon == std::string_view::npos ? std::string_view{} : which.substr(colon + 1);
  if (head == "sate" && arg.empty()) return sate_draws(chain);
  if (head == "ite" && !arg.empty()) {
    const double idx = csv::parse_double(arg, 0);
    if (idx < 0 || idx != static_cast<double>(static_cast<Eigen::Index>(idx))) {
      throw std::invalid_argument("ite index must be a nonnegative integer");
    }
    return ite_draws(chain, static_cast<Eigen::Index>(idx));
  }
  if (head == "cate" && !arg.empty()) return cate_draws(chain, csv::parse_double(arg, 0));
  if (head == "pate") {
    switch (arg.empty() ? PateBackend::kClosedForm : parse_backend(arg)) {
      case PateBackend::kParametricMc: return pate_mc(chain, samples, rng);
      case PateBackend::kBayesianBootstrap: return pate_bb(chain, rng);
      case PateBackend::kEmpirical: return pate_ecdf(chain);
      default: return pate_closed(chain);
    }
  }
  throw std::invalid_argument("unrecognized estimand '" + std::string(which) +
                              "', expected ite:<i>, sate, cate:<l> or pate:<backend>");
}

void write_estimand_draws(std::ostream& out, const std::vector<EstimandDraws>& estimands) {
  out << "draw,kind,backend,value\n";
  for (const auto& e : estimands) {
    const std::string kind = e.kind_label();
    const std::string_view backend = to_string(e.backend);
    for (Eigen::Index t = 0; t < e.values.size(); ++t) {
      out << (t + 1) << ',' << kind << ',' << backend << ',' << csv::format(e.values[t]) << '\n';
    }
  }
}

}  // namespace causalpost
