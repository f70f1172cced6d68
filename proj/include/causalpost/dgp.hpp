#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <iosfwd>

#include "causalpost/rng.hpp"

namespace causalpost {

/// Parameters of the synthetic data-generating process. Defaults give
/// n = 50 subjects with true CATE psi(l) = 5 - 9 l and true PATE 5.
///
///   l      ~ N(eta, tau^2)
///   a | l  ~ Bernoulli(expit(gamma0 + gamma1 l))
///   (y1, y0) | l ~ BVN((beta01 + beta11 l, beta00 + beta10 l), sigma1, sigma0, rho_true)
struct DgpConfig {
  Eigen::Index n = 50;
  double eta = 0.0;
  double tau = 1.0;
  double gamma0 = 1.0;
  double gamma1 = 2.0;
  double beta01 = 10.0;
  double beta11 = -4.0;
  double beta00 = 5.0;
  double beta10 = 5.0;
  double sigma1 = 1.0;
  double sigma0 = 1.0;
  double rho_true = 0.0;

  /// Throws std::invalid_argument. Zero scales are accepted (degenerate draws).
  void validate() const;
};

struct CompleteRecord {
  double y1;
  double y0;
  int a;
  double l;
};

struct ObservedRecord {
  double y;
  int a;
  double l;
};

/// Column-oriented complete data: both potential outcomes per subject.
struct CompleteData {
  Eigen::VectorXd y1;
  Eigen::VectorXd y0;
  Eigen::VectorXi a;
  Eigen::VectorXd l;

  Eigen::Index size() const { return l.size(); }
  CompleteRecord operator[](Eigen::Index i) const { return {y1[i], y0[i], a[i], l[i]}; }
  void push_back(const CompleteRecord& r);
};

/// Column-oriented observed data (y, a, l); y is the factual outcome.
struct ObservedData {
  Eigen::VectorXd y;
  Eigen::VectorXi a;
  Eigen::VectorXd l;

  Eigen::Index size() const { return l.size(); }
  ObservedRecord operator[](Eigen::Index i) const { return {y[i], a[i], l[i]}; }
  void push_back(const ObservedRecord& r);
  Eigen::Index treated_count() const { return a.sum(); }

  friend bool operator==(const ObservedData& x, const ObservedData& y);
};

/// Ground truth: realized ITEs/SATE and the closed-form population estimands.
struct TruthRecord {
  Eigen::VectorXd ites;
  double sate = 0;
  double cate_intercept = 0;
  double cate_slope = 0;
  double pate = 0;
};

CompleteData generate_complete(const DgpConfig& cfg, Rng& rng);

/// Keeps the factual arm, y = a*y1 + (1-a)*y0, and drops the counterfactual.
ObservedData mask(const CompleteData& complete);

TruthRecord true_estimands(const CompleteData& complete, const DgpConfig& cfg);

/// Reads `y,a,l` text. Malformed rows raise ParseError, a outside {0,1}
/// raises ValidationError; both name the offending line.
ObservedData load_observed(const std::filesystem::path& path);
ObservedData read_observed(std::istream& in);
CompleteData load_complete(const std::filesystem::path& path);
CompleteData read_complete(std::istream& in);

void write_observed(std::ostream& out, const ObservedData& data);
void write_complete(std::ostream& out, const CompleteData& data);
/// `quantity,value` rows: sate, cate_intercept, cate_slope, pate, ite_1..ite_n.
void write_truth(std::ostream& out, const TruthRecord& truth);

}  // namespace causalpost
