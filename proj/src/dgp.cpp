#include "causalpost/dgp.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "causalpost/csv.hpp"
#include "causalpost/dists.hpp"

namespace causalpost {
namespace {

template <typename Vec>
void append(Vec& v, typename Vec::Scalar x) {
  v.conservativeResize(v.size() + 1);
  v[v.size() - 1] = x;
}

int parse_arm(std::string_view field, std::size_t line) {
  const double v = csv::parse_double(field, line);
  if (v != 0.0 && v != 1.0) {
    throw ValidationError("line " + std::to_string(line) + ": treatment a must be 0 or 1, got '" +
                              std::string(csv::trim(field)) + "'",
                          line);
  }
  return static_cast<int>(v);
}

std::vector<std::string_view> fields(const std::string& line, std::size_t expected, std::size_t line_no) {
  auto f = csv::split(line);
  if (f.size() != expected) {
    throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(expected) +
                         " fields, got " + std::to_string(f.size()),
                     line_no);
  }
  return f;
}

}  // namespace

void DgpConfig::validate() const {
  if (n < 2) throw std::invalid_argument("DgpConfig: n must be >= 2");
  if (!(tau >= 0)) throw std::invalid_argument("DgpConfig: tau must be nonnegative");
  if (!(sigma1 >= 0) || !(sigma0 >= 0)) throw std::invalid_argument("DgpConfig: sigma1, sigma0 must be nonnegative");
  if (!(std::abs(rho_true) <= 1)) throw std::invalid_argument("DgpConfig: |rho_true| must be <= 1");
  for (double v : {eta, gamma0, gamma1, beta01, beta11, beta00, beta10}) {
    if (!std::isfinite(v)) throw std::invalid_argument("DgpConfig: coefficients must be finite");
  }
}

void CompleteData::push_back(const CompleteRecord& r) {
  append(y1, r.y1);
  append(y0, r.y0);
  append(a, r.a);
  append(l, r.l);
}

void ObservedData::push_back(const ObservedRecord& r) {
  append(y, r.y);
  append(a, r.a);
  append(l, r.l);
}

bool operator==(const ObservedData& x, const ObservedData& y) {
  return x.size() == y.size() && x.y == y.y && x.a == y.a && x.l == y.l;
}

CompleteData generate_complete(const DgpConfig& cfg, Rng& rng) {
  cfg.validate();
  const Eigen::Index n = cfg.n;
  CompleteData out{Eigen::VectorXd(n), Eigen::VectorXd(n), Eigen::VectorXi(n), Eigen::VectorXd(n)};
  const double resid_scale = std::sqrt(std::max(0.0, 1.0 - cfg.rho_true * cfg.rho_true));
  for (Eigen::Index i = 0; i < n; ++i) {
    const double l = normal_sample(cfg.eta, cfg.tau, rng);
    const int a = bernoulli_expit(cfg.gamma0 + cfg.gamma1 * l, rng);
    const double z1 = rng.standard_normal();
    const double z0 = cfg.rho_true * z1 + resid_scale * rng.standard_normal();
    out.l[i] = l;
    out.a[i] = a;
    out.y1[i] = cfg.beta01 + cfg.beta11 * l + cfg.sigma1 * z1;
    out.y0[i] = cfg.beta00 + cfg.beta10 * l + cfg.sigma0 * z0;
  }
  return out;
}

ObservedData mask(const CompleteData& complete) {
  ObservedData out{Eigen::VectorXd(complete.size()), complete.a, complete.l};
  for (Eigen::Index i = 0; i < complete.size(); ++i) {
    out.y[i] = complete.a[i] == 1 ? complete.y1[i] : complete.y0[i];
  }
  return out;
}

TruthRecord true_estimands(const CompleteData& complete, const DgpConfig& cfg) {
  if (complete.size() == 0) throw std::invalid_argument("true_estimands: empty data");
  TruthRecord t;
  t.ites = complete.y1 - complete.y0;
  t.sate = t.ites.mean();
  t.cate_intercept = cfg.beta01 - cfg.beta00;
  t.cate_slope = cfg.beta11 - cfg.beta10;
  t.pate = t.cate_intercept + t.cate_slope * cfg.eta;
  return t;
}

ObservedData read_observed(std::istream& in) {
  csv::Reader reader(in);
  csv::expect_header(reader, "y,a,l");
  ObservedData out;
  std::string line;
  while (reader.next(line)) {
    const auto ln = reader.line_number();
    const auto f = fields(line, 3, ln);
    const double y = csv::parse_double(f[0], ln);
    const double l = csv::parse_double(f[2], ln);
    out.push_back({y, parse_arm(f[1], ln), l});
  }
  return out;
}

CompleteData read_complete(std::istream& in) {
  csv::Reader reader(in);
  csv::expect_header(reader, "y1,y0,a,l");
  CompleteData out;
  std::string line;
  while (reader.next(line)) {
    const auto ln = reader.line_number();
    const auto f = fields(line, 4, ln);
    const double y1 = csv::parse_double(f[0], ln);
    const double y0 = csv::parse_double(f[1], ln);
    const double l = csv::parse_double(f[3], ln);
    out.push_back({y1, y0, parse_arm(f[2], ln), l});
  }
  return out;
}

ObservedData load_observed(const std::filesystem::path& path) {
  auto in = csv::open_input(path);
  return read_observed(in);
}

CompleteData load_complete(const std::filesystem::path& path) {
  auto in = csv::open_input(path);
  return read_complete(in);
}

void write_observed(std::ostream& out, const ObservedData& data) {
  out << "y,a,l\n";
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    out << csv::format(data.y[i]) << ',' << data.a[i] << ',' << csv::format(data.l[i]) << '\n';
  }
}

void write_complete(std::ostream& out, const CompleteData& data) {
  out << "y1,y0,a,l\n";
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    out << csv::format(data.y1[i]) << ',' << csv::format(data.y0[i]) << ',' << data.a[i] << ','
        << csv::format(data.l[i]) << '\n';
  }
}

void write_truth(std::ostream& out, const TruthRecord& truth) {
  out << "quantity,value\n";
  out << "sate," << csv::format(truth.sate) << '\n';
  out << "cate_intercept," << csv::format(truth.cate_intercept) << '\n';
  out << "cate_slope," << csv::format(truth.cate_slope) << '\n';
  out << "pate," << csv::format(truth.pate) << '\n';
  for (Eigen::Index i = 0; i < truth.ites.size(); ++i) {
    out << "ite_" << (i + 1) << ',' << csv::format(truth.ites[i]) << '\n';
  }
}

}  // namespace causalpost
