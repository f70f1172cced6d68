#include <catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "causalpost/dists.hpp"
#include "causalpost/rng.hpp"
#include "test_support.hpp"

using namespace causalpost;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Reference xoshiro256** with the documented seeding, written from the
// published algorithm rather than shared with the library.
struct ReferenceXoshiro {
  std::array<std::uint64_t, 4> s{};

  static std::uint64_t splitmix(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  ReferenceXoshiro(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t a = seed;
    std::uint64_t b = stream ^ 0xD1B54A32D192ED03ULL;
    s[0] = splitmix(a);
    s[1] = splitmix(b);
    s[2] = splitmix(a);
    s[3] = splitmix(b);
    for (int i = 0; i < 16; ++i) next();
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s[1] * 5, 7) * 9;
    const std::uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl(s[3], 45);
    return result;
  }
};

// Joint draw through an explicit Cholesky factor of the 2x2 covariance.
std::pair<double, double> oracle_bvn_draw(const BvnParams& p, Rng& rng) {
  const double z1 = rng.standard_normal();
  const double z2 = rng.standard_normal();
  const double y1 = p.mu1 + p.sigma1 * z1;
  const double y0 = p.mu0 + p.sigma0 * (p.rho * z1 + std::sqrt(1 - p.rho * p.rho) * z2);
  return {y1, y0};
}

// log N2 via explicit inverse covariance, in long double.
long double oracle_bvn_logpdf(const BvnParams& p, double y1, double y0) {
  const long double s11 = (long double)p.sigma1 * p.sigma1;
  const long double s00 = (long double)p.sigma0 * p.sigma0;
  const long double s10 = (long double)p.rho * p.sigma1 * p.sigma0;
  const long double det = s11 * s00 - s10 * s10;
  const long double d1 = (long double)y1 - p.mu1;
  const long double d0 = (long double)y0 - p.mu0;
  const long double q = (s00 * d1 * d1 - 2 * s10 * d1 * d0 + s11 * d0 * d0) / det;
  return -std::log(2 * std::numbers::pi_v<long double>) - 0.5L * std::log(det) - 0.5L * q;
}

BvnParams random_params(Rng& rng, double max_rho) {
  BvnParams p;
  p.mu1 = 10 * (rng.uniform() - 0.5);
  p.mu0 = 10 * (rng.uniform() - 0.5);
  p.sigma1 = 0.2 + 3 * rng.uniform();
  p.sigma0 = 0.2 + 3 * rng.uniform();
  p.rho = max_rho * (2 * rng.uniform() - 1);
  return p;
}

}  // namespace

TEST_CASE("rng matches reference xoshiro256** stream", "[rng]") {
  for (std::uint64_t seed : {0ULL, 1ULL, 42ULL, 0xFFFFFFFFFFFFFFFFULL}) {
    for (std::uint64_t stream : {0ULL, 7ULL}) {
      Rng rng(seed, stream);
      ReferenceXoshiro ref(seed, stream);
      for (int i = 0; i < 1000; ++i) REQUIRE(rng.next_u64() == ref.next());
    }
  }
}

TEST_CASE("rng is deterministic and streams differ", "[rng]") {
  Rng a(123, 4), b(123, 4), c(123, 5), d(124, 4);
  std::vector<double> xa, xb;
  for (int i = 0; i < 1000; ++i) {
    xa.push_back(a.standard_normal());
    xb.push_back(b.standard_normal());
  }
  REQUIRE(xa == xb);
  REQUIRE(a == b);
  REQUIRE(c.next_u64() != d.next_u64());
  REQUIRE(Rng(123, 4).next_u64() != Rng(123, 5).next_u64());
  REQUIRE(Rng(1, 2).substream(3) == Rng(1, 2).substream(3));
  REQUIRE_FALSE(Rng(1, 2).substream(3) == Rng(1, 2).substream(4));
}

TEST_CASE("distinct streams are uncorrelated", "[rng]") {
  constexpr int kN = 200000;
  Rng a(99, 0), b(99, 1);
  double sab = 0, sa = 0, sb = 0, saa = 0, sbb = 0;
  for (int i = 0; i < kN; ++i) {
    const double x = a.uniform(), y = b.uniform();
    sa += x, sb += y, sab += x * y, saa += x * x, sbb += y * y;
  }
  const double cov = sab / kN - (sa / kN) * (sb / kN);
  const double corr = cov / std::sqrt((saa / kN - sa * sa / kN / kN) * (sbb / kN - sb * sb / kN / kN));
  REQUIRE(std::abs(corr) < 5 / std::sqrt(double(kN)));
}

TEST_CASE("uniform stays inside the open unit interval", "[rng]") {
  Rng rng(5, 0);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("uniform_index is unbiased over a small range", "[rng]") {
  Rng rng(8, 0);
  constexpr int kBins = 7;
  constexpr int kN = 700000;
  std::array<int, kBins> counts{};
  for (int i = 0; i < kN; ++i) ++counts[rng.uniform_index(kBins)];
  double chi2 = 0;
  for (int c : counts) chi2 += (c - kN / double(kBins)) * (c - kN / double(kBins)) / (kN / double(kBins));
  REQUIRE(chi2 < 22.46);  // chi-square(6) 0.999 quantile
  REQUIRE_THROWS_AS(rng.uniform_index(0), std::invalid_argument);
}

TEST_CASE("normal_sample degenerate and error cases", "[dists]") {
  Rng rng(1, 0);
  const Rng before = rng;
  REQUIRE(normal_sample(7.0, 0.0, rng) == 7.0);
  REQUIRE(rng == before);
  REQUIRE_THROWS_AS(normal_sample(0.0, -1.0, rng), std::invalid_argument);
}

TEST_CASE("normal_sample law of large numbers", "[dists]") {
  constexpr int kN = 1000000;
  Rng rng(2024, 0);
  double sum = 0, sumsq = 0;
  for (int i = 0; i < kN; ++i) {
    const double x = normal_sample(0.0, 1.0, rng);
    sum += x;
    sumsq += x * x;
  }
  REQUIRE(std::abs(sum / kN) < 0.005);
  REQUIRE_THAT(sumsq / kN, WithinAbs(1.0, 0.01));
}

TEST_CASE("normal_sample repeats under the same key", "[dists]") {
  Rng a(77, 3), b(77, 3);
  for (int i = 0; i < 1000; ++i) REQUIRE(normal_sample(0, 1, a) == normal_sample(0, 1, b));
}

TEST_CASE("bvn_conditional closed forms", "[dists]") {
  SECTION("rho = 0 gives the marginal") {
    const BvnParams p{2, 1, 1.5, 0.5, 0};
    const auto c1 = bvn_conditional(p, Arm::kTreated, 9.0);
    REQUIRE(c1.mean == 1.0);
    REQUIRE(c1.sd == 0.5);
    const auto c0 = bvn_conditional(p, Arm::kControl, -4.0);
    REQUIRE(c0.mean == 2.0);
    REQUIRE(c0.sd == 1.5);
  }
  SECTION("worked example") {
    const auto c = bvn_conditional(BvnParams{2, 1, 1, 1, 0.5}, Arm::kTreated, 3.0);
    REQUIRE_THAT(c.mean, WithinAbs(1.5, 1e-15));
    REQUIRE_THAT(c.sd, WithinAbs(std::sqrt(0.75), 1e-15));
  }
  SECTION("perfect correlation is deterministic") {
    const auto c = bvn_conditional(BvnParams{2, 1, 1.3, 1.3, 1.0}, Arm::kTreated, 3.5);
    REQUIRE_THAT(c.mean, WithinAbs(1 + (3.5 - 2), 1e-15));
    REQUIRE(c.sd == 0.0);
  }
  SECTION("zero observed sd is an error") {
    REQUIRE_THROWS_AS(bvn_conditional(BvnParams{0, 0, 0, 1, 0.2}, Arm::kTreated, 0.0), std::invalid_argument);
  }
}

TEST_CASE("bvn_conditional agrees with rejection sampling from the joint", "[dists][oracle]") {
  const BvnParams p{2, 1, 1, 1, 0.5};
  constexpr double kBand = 0.02;
  Rng rng(31337, 0);
  double sum = 0, sumsq = 0;
  int kept = 0;
  for (int i = 0; i < 3000000; ++i) {
    const auto [y1, y0] = oracle_bvn_draw(p, rng);
    if (std::abs(y1 - 3.0) < kBand) {
      sum += y0;
      sumsq += y0 * y0;
      ++kept;
    }
  }
  REQUIRE(kept > 10000);
  const double m = sum / kept;
  const double s = std::sqrt(sumsq / kept - m * m);
  const auto c = bvn_conditional(p, Arm::kTreated, 3.0);
  const double se = c.sd / std::sqrt(double(kept));
  REQUIRE(std::abs(m - c.mean) < 4 * se + kBand * p.rho);
  REQUIRE_THAT(s, WithinAbs(c.sd, 4 * c.sd / std::sqrt(2.0 * kept) + 1e-3));
}

TEST_CASE("bvn_logpdf special values", "[dists]") {
  const BvnParams standard{0, 0, 1, 1, 0};
  REQUIRE_THAT(bvn_logpdf(standard, 0.0, 0.0), WithinAbs(-std::log(2 * std::numbers::pi), 1e-15));
  Rng rng(3, 0);
  for (int k = 0; k < 200; ++k) {
    BvnParams p = random_params(rng, 0);
    p.rho = 0;
    const double y1 = 6 * rng.standard_normal(), y0 = 6 * rng.standard_normal();
    REQUIRE_THAT(bvn_logpdf(p, y1, y0),
                 WithinAbs(normal_logpdf(y1, p.mu1, p.sigma1) + normal_logpdf(y0, p.mu0, p.sigma0), 1e-12));
  }
  REQUIRE_THROWS_AS(bvn_logpdf(BvnParams{0, 0, 1, 1, 1.0}, 0.0, 0.0), std::invalid_argument);
  REQUIRE_THROWS_AS(bvn_logpdf(BvnParams{0, 0, 1, 1, -1.2}, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("bvn_logpdf matches long-double quadratic form", "[dists][oracle]") {
  Rng rng(4, 0);
  for (int k = 0; k < 2000; ++k) {
    const BvnParams p = random_params(rng, 0.99);
    const double y1 = p.mu1 + 4 * p.sigma1 * rng.standard_normal();
    const double y0 = p.mu0 + 4 * p.sigma0 * rng.standard_normal();
    const double got = bvn_logpdf(p, y1, y0);
    const double want = static_cast<double>(oracle_bvn_logpdf(p, y1, y0));
    REQUIRE(std::abs(got - want) <= 1e-12 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("bvn_logpdf marginalizes to the normal density", "[dists][property]") {
  Rng rng(5, 0);
  for (int k = 0; k < 50; ++k) {
    const BvnParams p = random_params(rng, 0.9);
    const double y1 = p.mu1 + 2 * p.sigma1 * rng.standard_normal();
    // Composite Simpson over mu0 +- 14 sd.
    constexpr int kIntervals = 4000;
    const double lo = p.mu0 - 14 * p.sigma0, hi = p.mu0 + 14 * p.sigma0;
    const double h = (hi - lo) / kIntervals;
    double acc = 0;
    for (int i = 0; i <= kIntervals; ++i) {
      const double w = (i == 0 || i == kIntervals) ? 1 : (i % 2 ? 4 : 2);
      acc += w * std::exp(bvn_logpdf(p, y1, lo + i * h));
    }
    const double integral = acc * h / 3;
    REQUIRE_THAT(integral, WithinAbs(std::exp(normal_logpdf(y1, p.mu1, p.sigma1)), 1e-6));
  }
}

TEST_CASE("joint density factors through bvn_conditional", "[dists][property]") {
  Rng rng(6, 0);
  for (int k = 0; k < 1000; ++k) {
    const BvnParams p = random_params(rng, 0.95);
    const double y1 = p.mu1 + 3 * p.sigma1 * rng.standard_normal();
    const double y0 = p.mu0 + 3 * p.sigma0 * rng.standard_normal();
    const auto c1 = bvn_conditional(p, Arm::kTreated, y1);
    REQUIRE_THAT(normal_logpdf(y1, p.mu1, p.sigma1) + normal_logpdf(y0, c1.mean, c1.sd),
                 WithinAbs(bvn_logpdf(p, y1, y0), 1e-10));
    const auto c0 = bvn_conditional(p, Arm::kControl, y0);
    REQUIRE_THAT(normal_logpdf(y0, p.mu0, p.sigma0) + normal_logpdf(y1, c0.mean, c0.sd),
                 WithinAbs(bvn_logpdf(p, y1, y0), 1e-10));
  }
}

TEST_CASE("dirichlet_ones", "[dists]") {
  Rng rng(7, 0);
  SECTION("n = 1") { REQUIRE(dirichlet_ones(1, rng) == Eigen::VectorXd::Ones(1)); }
  SECTION("normalization arithmetic") {
    const Eigen::VectorXd w = normalize_to_simplex(Eigen::Vector3d(1, 1, 2));
    REQUIRE(w == Eigen::Vector3d(0.25, 0.25, 0.5));
  }
  SECTION("n = 0 is an error") { REQUIRE_THROWS_AS(dirichlet_ones(0, rng), std::invalid_argument); }
  SECTION("marginal means are 1/n") {
    constexpr int kN = 50, kDraws = 100000;
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(kN);
    for (int d = 0; d < kDraws; ++d) acc += dirichlet_ones(kN, rng);
    acc /= kDraws;
    const double sd = std::sqrt((kN - 1.0) / (kN * kN * (kN + 1.0)));
    REQUIRE((acc.array() - 1.0 / kN).abs().maxCoeff() < 5 * sd / std::sqrt(double(kDraws)));
  }
  SECTION("outputs lie on the simplex") {
    for (Eigen::Index n : {1, 2, 3, 10, 100, 1000, 10000}) {
      const Eigen::VectorXd w = dirichlet_ones(n, rng);
      REQUIRE(w.size() == n);
      REQUIRE((w.array() >= 0).all());
      REQUIRE_THAT(w.sum(), WithinAbs(1.0, 1e-12));
    }
  }
}

TEST_CASE("expit and bernoulli_expit", "[dists]") {
  REQUIRE(expit(800.0) == 1.0);
  REQUIRE(expit(-800.0) >= 0.0);
  REQUIRE(std::isfinite(expit(-800.0)));
  REQUIRE_THAT(expit(-30.0), WithinRel(std::exp(-30.0) / (1 + std::exp(-30.0)), 1e-14));

  Rng rng(8, 1);
  for (int i = 0; i < 10000; ++i) REQUIRE(bernoulli_expit(40.0, rng) == 1);
  for (int i = 0; i < 100; ++i) REQUIRE(bernoulli_expit(std::numeric_limits<double>::infinity(), rng) == 1);

  constexpr int kN = 1000000;
  int hits0 = 0, hits1 = 0;
  for (int i = 0; i < kN; ++i) {
    hits0 += bernoulli_expit(0.0, rng);
    hits1 += bernoulli_expit(1.0, rng);
  }
  REQUIRE(std::abs(hits0 / double(kN) - 0.5) < 5 * 0.5 / std::sqrt(double(kN)));
  const double p1 = 1 / (1 + std::exp(-1.0));
  REQUIRE_THAT(p1, WithinAbs(0.7311, 1e-4));
  REQUIRE(std::abs(hits1 / double(kN) - p1) < 5 * std::sqrt(p1 * (1 - p1) / kN));
}
