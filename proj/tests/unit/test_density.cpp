#include <gtest/gtest.h>

#include <cmath>

#include "gen.hpp"
#include "stable_msu/density.hpp"
#include "stable_msu/errors.hpp"
#include "stable_msu/kanter.hpp"

namespace stable_msu {
namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

TEST(AlphaValue, ParsesDecimalsAndFractions) {
  EXPECT_DOUBLE_EQ(Alpha::parse("0.35").value(), 0.35);
  const Alpha a = Alpha::parse("4/10");
  ASSERT_TRUE(a.rational_form().has_value());
  EXPECT_EQ(a.rational_form()->num, 2);
  EXPECT_EQ(a.rational_form()->den, 5);
  EXPECT_EQ(a.to_string(), "2/5");
  EXPECT_TRUE(Alpha(0.5).equals(1, 2));
}

TEST(AlphaValue, RejectsOutOfRange) {
  EXPECT_THROW(Alpha(1.0), DomainError);
  EXPECT_THROW(Alpha(0.0), DomainError);
  EXPECT_THROW(Alpha::parse("3/2"), DomainError);
  EXPECT_THROW(Alpha::parse("half"), DomainError);
}

struct JetCase {
  double alpha, x, f, fp, fpp;
};

TEST(DensityJet, MatchesHighPrecisionReference) {
  const JetCase cases[] = {
      {0.5, 1.0, 0.2196956447338612, -0.2746195559173265, 0.56297008963051932},
      {0.3, 0.05, 1.6149951456973301, -18.889676831717583, 416.54101723681226},
      {0.3, 2.0, 0.054783242263121491, -0.030700935792754203, 0.031683514305823704},
      {0.7, 0.5, 0.96511911846936191, -1.1112641742099269, -10.013917443083481},
      {0.7, 3.0, 0.050000904020222367, -0.031408851066749943, 0.03051015337295548},
      {0.9, 1.5, 0.18743128172326813, -0.43826929372991874, 1.4764942040711823},
      {0.6, 20.0, 0.0023695841694444693, -0.00019297236399554624, 2.5432063986197935e-5},
  };
  for (const JetCase& c : cases) {
    const DensityJet j = density_jet(Alpha(c.alpha), c.x);
    ASSERT_TRUE(j.f.reliable) << c.alpha << " " << c.x;
    EXPECT_LT(rel(j.f.value, c.f), 1e-11) << c.alpha << " " << c.x;
    EXPECT_LT(rel(j.fp.value, c.fp), 1e-10) << c.alpha << " " << c.x;
    EXPECT_LT(rel(j.fpp.value, c.fpp), 1e-9) << c.alpha << " " << c.x;
  }
}

TEST(DensitySeries, ErrorEstimateCoversTruthNearReliableEdge) {
  const EvalResult r = density_series(Alpha(0.3), 0.001);
  ASSERT_TRUE(r.reliable);
  EXPECT_LE(std::abs(r.value - 0.275044869061347517), r.abs_error_estimate);
}

TEST(DensitySeries, FlagsCancellationBelowReliableDomain) {
  EXPECT_FALSE(density_series(Alpha(0.5), 1e-3).reliable);
  EXPECT_FALSE(density_series(Alpha(0.9), 0.05).reliable);
}

TEST(DensitySeries, RejectsNonPositiveArgument) {
  EXPECT_THROW(density_series(Alpha(0.5), 0.0), DomainError);
  EXPECT_THROW(density_series(Alpha(0.5), -1.0), DomainError);
}

TEST(DensitySeries, ExtendedPrecisionAgreesAndReachesFurther) {
  SeriesConfig wide;
  wide.precision_bits = 128;
  const Alpha a(0.5);
  EXPECT_LT(rel(density_series(a, 1.0, wide).value, density_series(a, 1.0).value), 1e-14);
  EXPECT_LT(reliable_lower_bound(a, wide), reliable_lower_bound(a));
  const double x = 0.9 * reliable_lower_bound(a);
  const EvalResult r = density_series(a, x, wide);
  ASSERT_TRUE(r.reliable);
  EXPECT_LT(rel(r.value, density_closed(a, x).value), 1e-12);
}

TEST(DensitySeries, InvalidConfigThrows) {
  SeriesConfig c;
  c.max_terms = 0;
  EXPECT_THROW(density_series(Alpha(0.5), 1.0, c), DomainError);
}

TEST(DensityClosed, ReferenceValues) {
  EXPECT_LT(rel(density_closed(Alpha::rational(1, 2), 4.0).value, 0.033125441543003571), 1e-14);
  EXPECT_LT(rel(density_closed(Alpha::rational(1, 3), 1.0).value, 0.13207982656883419), 1e-10);
  EXPECT_LT(rel(density_closed(Alpha::rational(2, 3), 1.0).value, 0.3505680759201118), 1e-9);
  EXPECT_LT(rel(two_thirds_normalization(), 0.97720502380584018), 1e-9);
  EXPECT_THROW(density_closed(Alpha(0.4), 1.0), DomainError);
}

TEST(DensityClosed, SeriesAgreementOnLogGrid) {
  for (auto [p, n, tol] : {std::tuple{1, 2, 1e-8}, {1, 3, 1e-8}, {2, 3, 1e-6}}) {
    const Alpha a = Alpha::rational(p, n);
    for (int i = 0; i < 50; ++i) {
      const double x = 0.2 * std::pow(100.0, i / 49.0);
      EXPECT_LT(rel(density_series(a, x).value, density_closed(a, x).value), tol) << a.to_string() << " " << x;
    }
  }
}

TEST(TailCoefficient, ReferenceValueAndLargeXLimit) {
  EXPECT_LT(rel(tail_coefficient(Alpha::rational(1, 3)), 0.24616270387388277), 1e-13);
  const Alpha a(0.4);
  const double x = 1e10;
  EXPECT_LT(rel(density_series(a, x).value * std::pow(x, 1.4), tail_coefficient(a)), 1e-3);
}

TEST(ReliableLowerBound, KnownMagnitudes) {
  EXPECT_NEAR(std::log10(reliable_lower_bound(Alpha(0.3))), std::log10(6.0e-4), 0.1);
  EXPECT_NEAR(reliable_lower_bound(Alpha(0.5)), 0.0246, 0.002);
  EXPECT_NEAR(reliable_lower_bound(Alpha(0.7)), 0.154, 0.01);
}

TEST(ReliableLowerBound, EveryPointAboveIsReliable) {
  testing::Gen g(21);
  for (int i = 0; i < 40; ++i) {
    const Alpha a(g.alpha(0.1, 0.9));
    const double lo = reliable_lower_bound(a);
    const double x = lo * g.log_uniform(1.0, 1e4);
    EXPECT_TRUE(density_series(a, x).reliable) << "case " << i << " alpha=" << a.value() << " x=" << x;
  }
}

TEST(DensityProperty, SeriesMatchesKanterRoute) {
  testing::Gen g(22);
  for (int i = 0; i < 60; ++i) {
    const Alpha a(g.alpha(0.1, 0.9));
    const double x = 2.0 * reliable_lower_bound(a) * g.log_uniform(1.0, 1e3);
    const EvalResult s = density_series(a, x);
    const KanterJet k = kanter_density_jet(a, x);
    EXPECT_GT(s.value, 0.0);
    const double allowed = s.abs_error_estimate + k.f.abs_error_estimate + 1e-13 * s.value;
    EXPECT_LE(std::abs(s.value - k.f.value), allowed) << "case " << i << " alpha=" << a.value() << " x=" << x;
  }
}

TEST(DensityProperty, DerivativesMatchFiniteDifferences) {
  testing::Gen g(23);
  for (int i = 0; i < 40; ++i) {
    const Alpha a(g.alpha(0.15, 0.85));
    const double x = 10.0 * reliable_lower_bound(a) * g.log_uniform(1.0, 100.0);
    const double h = 1e-4 * x;
    const StableSeries s(a);
    const DensityJet j = s.jet(x);
    const double fp_fd = (s.density(x + h).value - s.density(x - h).value) / (2 * h);
    const double fpp_fd = (s.jet(x + h).fp.value - s.jet(x - h).fp.value) / (2 * h);
    EXPECT_NEAR(j.fp.value, fp_fd, 1e-6 * (std::abs(fp_fd) + j.f.value / x)) << "case " << i;
    EXPECT_NEAR(j.fpp.value, fpp_fd, 1e-6 * (std::abs(fpp_fd) + j.f.value / (x * x))) << "case " << i;
  }
}

TEST(DensityProperty, SurvivalComplementsKanterCdf) {
  testing::Gen g(24);
  for (int i = 0; i < 40; ++i) {
    const Alpha a(g.alpha(0.1, 0.9));
    const double x = 3.0 * reliable_lower_bound(a) * g.log_uniform(1.0, 1e3);
    const EvalResult s = StableSeries(a).survival(x);
    if (!s.reliable) continue;
    EXPECT_NEAR(s.value + kanter_cdf(a, x).value, 1.0, 1e-9) << "case " << i << " x=" << x;
  }
}

TEST(LaplaceCheck, NormalisationAtZero) {
  const LaplaceCheck c = laplace_check(Alpha(0.3), 0.0);
  EXPECT_TRUE(c.reliable);
  EXPECT_LT(c.discrepancy, 1e-6);
  EXPECT_NEAR(c.expected, 1.0, 0.0);
}

TEST(LaplaceCheck, MatchesTransformAcrossLambda) {
  for (double a : {0.3, 0.5, 0.7}) {
    for (double l : {0.5, 1.0, 2.0, 4.0}) {
      const LaplaceCheck c = laplace_check(Alpha(a), l);
      EXPECT_LT(c.discrepancy, 1e-5) << a << " " << l;
      EXPECT_NEAR(c.expected, std::exp(-std::pow(l, a)), 1e-15);
    }
  }
  EXPECT_THROW(laplace_check(Alpha(0.5), -1.0), DomainError);
}

TEST(KanterCdf, HalfHasClosedForm) {
  const Alpha a = Alpha::rational(1, 2);
  for (double x : {0.01, 0.3, 1.0, 50.0}) {
    EXPECT_NEAR(kanter_cdf(a, x).value, std::erfc(0.5 / std::sqrt(x)), 1e-13) << x;
  }
}

}  // namespace
}  // namespace stable_msu
