#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "gen.hpp"
#include "stable_msu/errors.hpp"
#include "stable_msu/factorizations.hpp"
#include "stable_msu/kanter.hpp"
#include "stable_msu/msu.hpp"
#include "stable_msu/verify.hpp"

namespace stable_msu {
namespace {

std::vector<double> exponential_draws(std::size_t n, double offset, std::uint64_t seed) {
  RandomSource r(seed);
  std::vector<double> v(n);
  for (double& x : v) x = r.exponential() + offset;
  return v;
}

double exponential_cdf(double x) { return x <= 0.0 ? 0.0 : -std::expm1(-x); }

TEST(KsOneSample, CalibratedOnOwnDistribution) {
  const KsResult k = ks_one_sample(exponential_draws(100000, 0.0, 1), exponential_cdf);
  EXPECT_TRUE(k.pass);
  EXPECT_DOUBLE_EQ(k.critical_1pct, 1.628 / std::sqrt(100000.0));
  EXPECT_EQ(k.n_samples, 100000u);
}

TEST(KsOneSample, DetectsShift) {
  const KsResult k = ks_one_sample(exponential_draws(100000, 0.1, 2), exponential_cdf);
  EXPECT_FALSE(k.pass);
  EXPECT_GT(k.statistic, 0.05);
}

TEST(KsOneSample, SingleSampleAndEmpty) {
  const KsResult k = ks_one_sample({0.7}, exponential_cdf);
  EXPECT_GE(k.statistic, 0.0);
  EXPECT_LE(k.statistic, 1.0);
  EXPECT_THROW(ks_one_sample({}, exponential_cdf), DomainError);
}

TEST(KsOneSample, PassRateNearNominalLevel) {
  int passes = 0;
  for (std::uint64_t s = 0; s < 200; ++s) passes += ks_one_sample(exponential_draws(2000, 0.0, 100 + s), exponential_cdf).pass;
  EXPECT_GE(passes, 190);
}

TEST(KsTwoSample, SameAndShiftedDistributions) {
  const KsResult same = ks_two_sample(exponential_draws(50000, 0.0, 3), exponential_draws(40000, 0.0, 4));
  EXPECT_TRUE(same.pass);
  EXPECT_DOUBLE_EQ(same.critical_1pct, 1.628 * std::sqrt(90000.0 / (50000.0 * 40000.0)));
  EXPECT_FALSE(ks_two_sample(exponential_draws(50000, 0.0, 5), exponential_draws(50000, 0.1, 6)).pass);
  EXPECT_THROW(ks_two_sample({}, {1.0}), DomainError);
}

TEST(TabulatedCdfProperty, MonotoneAndBounded) {
  testing::Gen g(51);
  for (int i = 0; i < 6; ++i) {
    const Alpha a(g.alpha(0.1, 0.9));
    const TabulatedCdf cdf = stable_log_cdf(a, {}, 400);
    double prev = 0.0;
    for (int k = 0; k <= 4000; ++k) {
      const double t = -15.0 + 30.0 * k / 4000.0;
      const double v = cdf(t);
      ASSERT_GE(v, prev) << "alpha=" << a.value() << " t=" << t;
      ASSERT_LE(v, 1.0);
      prev = v;
    }
  }
}

TEST(TabulatedCdfProperty, StableTableMatchesKanterCdf) {
  testing::Gen g(52);
  for (int i = 0; i < 6; ++i) {
    const Alpha a(g.alpha(0.2, 0.8));
    const TabulatedCdf cdf = stable_log_cdf(a);
    for (int k = 0; k < 20; ++k) {
      const double t = g.uniform(cdf.lower(), cdf.upper());
      EXPECT_NEAR(cdf(t), kanter_cdf(a, std::exp(t)).value, 1e-9) << "alpha=" << a.value() << " t=" << t;
    }
  }
}

TEST(TabulatedCdfProperty, UalphaTableMatchesClosedForm) {
  for (double a : {0.2, 0.5, 0.8}) {
    const TabulatedCdf cdf = ualpha_cdf_table(Alpha(a));
    for (int k = -100; k <= 100; ++k) EXPECT_NEAR(cdf(0.5 * k), ualpha_cdf(Alpha(a), 0.5 * k), 1e-8) << a << " " << k;
  }
}

TEST(TabulatedCdf, RejectsBadTables) {
  auto tail = [](double) { return 0.0; };
  EXPECT_THROW(TabulatedCdf({0.0}, {0.0}, {0.0}, tail, tail), DomainError);
  EXPECT_THROW(TabulatedCdf({0.0, 1.0}, {0.5, 0.4}, {0.0, 0.0}, tail, tail), DomainError);
}

TEST(DeriveSeed, DistinctStreams) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 1000; ++s) seen.insert(derive_seed(20240229, s));
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_EQ(derive_seed(1, 2), derive_seed(1, 2));
}

TEST(CheckDiffIdentity, PassesWithSymmetry) {
  const IdentityReport r = check_diff_identity(Alpha(0.5), 200000, 9);
  EXPECT_TRUE(r.pass) << r.discrepancy;
  EXPECT_DOUBLE_EQ(r.threshold, kKsCoefficient1pct);
  EXPECT_TRUE(r.details.at("symmetry_pass").get<bool>());
  EXPECT_THROW(check_diff_identity(Alpha(0.5), 100, 9), DomainError);
}

TEST(CheckDiffIdentity, DeterministicForFixedSeed) {
  EXPECT_EQ(check_diff_identity(Alpha(0.8), 20000, 5).discrepancy,
            check_diff_identity(Alpha(0.8), 20000, 5).discrepancy);
}

TEST(CheckLaplace, PassesAndValidatesLambda) {
  const IdentityReport r = check_laplace(Alpha(0.5), {0.5, 1.0, 2.0});
  EXPECT_TRUE(r.pass) << r.discrepancy;
  EXPECT_LT(r.discrepancy, 1e-5);
  EXPECT_THROW(check_laplace(Alpha(0.5), {-0.5}), DomainError);
}

TEST(CheckFactorizationMc, PassesAndChecksPrecondition) {
  const IdentityReport r = check_factorization_mc(2, 5, 200000, 11);
  EXPECT_TRUE(r.pass) << r.discrepancy;
  EXPECT_THROW(check_factorization_mc(2, 4, 1000, 11), PreconditionError);
}

TEST(CheckSamplerKs, PassesForModerateSample) {
  const IdentityReport r = check_sampler_ks(Alpha(0.7), 200000, 12);
  EXPECT_TRUE(r.pass) << r.discrepancy;
}

}  // namespace
}  // namespace stable_msu
