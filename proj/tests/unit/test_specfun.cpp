#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gen.hpp"
#include "stable_msu/errors.hpp"
#include "stable_msu/specfun.hpp"

namespace stable_msu {
namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

TEST(LogGamma, MatchesReferenceValues) {
  EXPECT_LT(rel(log_gamma(10.3).value, 13.482036786138357), 1e-14);
  EXPECT_LT(rel(log_gamma(0.01).value, 4.5994798780420217), 1e-14);
  EXPECT_LT(rel(log_gamma(-0.6).value, 1.3075034414677744), 1e-14);
  EXPECT_EQ(log_gamma(-0.6).sign, -1);
}

TEST(LogGamma, GammaAtNegativeNonIntegers) {
  EXPECT_LT(rel(gamma_fn(-0.6), -3.6969325729294804), 1e-14);
  EXPECT_LT(rel(gamma_fn(-1.2), 4.8509571405220974), 1e-14);
  EXPECT_LT(rel(gamma_fn(-2.5), -0.94530872048294188), 1e-14);
}

TEST(LogGamma, HalfIntegerAndIntegerValues) {
  EXPECT_LT(rel(gamma_fn(0.5), std::sqrt(std::numbers::pi)), 1e-15);
  EXPECT_LT(rel(gamma_fn(6.0), 120.0), 1e-14);
}

TEST(LogGamma, PolesThrow) {
  EXPECT_THROW(log_gamma(0.0), PoleError);
  EXPECT_THROW(log_gamma(-3.0), PoleError);
}

TEST(LogGamma, RecurrenceProperty) {
  testing::Gen g(11);
  for (int i = 0; i < 500; ++i) {
    const double x = g.log_uniform(1e-3, 150.0);
    const double lhs = log_gamma(x + 1.0).value;
    const double rhs = log_gamma(x).value + std::log(x);
    EXPECT_NEAR(lhs, rhs, 1e-13 * std::max(1.0, std::abs(lhs))) << "case " << i << " x=" << x;
  }
}

TEST(LogGamma, ReflectionProperty) {
  testing::Gen g(12);
  for (int i = 0; i < 300; ++i) {
    const double x = g.uniform(0.01, 0.99);
    const double prod = gamma_fn(x) * gamma_fn(1.0 - x) * std::sin(std::numbers::pi * x);
    EXPECT_NEAR(prod, std::numbers::pi, 1e-13) << "case " << i << " x=" << x;
  }
}

TEST(BesselK, MatchesReferenceValues) {
  EXPECT_LT(rel(bessel_k(1.0 / 3.0, 1.0).value, 0.43843063344153436), 1e-10);
  EXPECT_LT(rel(bessel_k(1.0 / 3.0, 0.05).value, 3.9910177068675402), 1e-10);
  EXPECT_LT(rel(bessel_k(2.0 / 3.0, 3.0).value, 0.037057074495188499), 1e-10);
  EXPECT_LT(rel(bessel_k(0.0, 0.5).value, 0.92441907122766586), 1e-10);
}

TEST(BesselK, HalfOrderClosedForm) {
  for (double x : {0.1, 1.0, 5.0, 20.0}) {
    const double exact = std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x);
    EXPECT_LT(rel(bessel_k(0.5, x).value, exact), 1e-10) << x;
  }
}

TEST(BesselK, EvenInOrderAndRecurrence) {
  testing::Gen g(13);
  for (int i = 0; i < 100; ++i) {
    const double nu = g.uniform(0.0, 3.0), x = g.log_uniform(0.05, 30.0);
    const double k = bessel_k(nu, x).value;
    EXPECT_EQ(k, bessel_k(-nu, x).value);
    const double up = bessel_k(nu + 1.0, x).value, down = bessel_k(nu - 1.0, x).value;
    EXPECT_LT(rel(up, down + 2.0 * nu / x * k), 1e-9) << "case " << i << " nu=" << nu << " x=" << x;
  }
}

TEST(BesselK, NonPositiveArgumentThrows) { EXPECT_THROW(bessel_k(0.3, 0.0), DomainError); }

TEST(ConfluentPsi, ULambdaReferenceValues) {
  EXPECT_LT(rel(u_lambda(1.0, 1.0).value, 0.91998816706054605), 1e-9);
  EXPECT_LT(rel(u_lambda(4.0, 1.0).value, 1.0208671373347342), 1e-9);
  EXPECT_LT(rel(u_lambda(7.0, 1.0).value, 1.2078248219362213), 1e-9);
  EXPECT_LT(rel(u_lambda(10.0, 0.3).value, 6.6610534763563136), 1e-9);
}

TEST(ConfluentPsi, WhittakerReferenceValues) {
  EXPECT_LT(rel(whittaker_w_stable(1.0).value, 0.61918721828658391), 1e-9);
  EXPECT_LT(rel(whittaker_w_stable(0.1).value, 0.33154459789183745), 1e-9);
  EXPECT_LT(rel(whittaker_w_stable(10.0).value, 0.021363884105307853), 1e-9);
}

TEST(ConfluentPsi, IncreasingInSecondParameter) {
  // (1+s)^{c-a-1} grows with c for every s > 0
  testing::Gen g(14);
  for (int i = 0; i < 100; ++i) {
    const double c = g.uniform(-2.0, 3.0), x = g.log_uniform(0.05, 20.0);
    EXPECT_LE(psi_chf(1.0 / 6.0, c, x).value, psi_chf(1.0 / 6.0, c + 1.0, x).value) << "case " << i;
  }
}

TEST(ConfluentPsi, ElementaryCase) {
  // c = a + 1 leaves int e^{-xs} s^{a-1} ds = Gamma(a) x^{-a}
  for (double x : {0.2, 1.0, 7.0}) {
    const double a = 1.0 / 6.0;
    EXPECT_LT(rel(psi_chf(a, a + 1.0, x).value, std::pow(x, -a)), 1e-9) << x;
  }
}

TEST(ConfluentPsi, InvalidArgumentsThrow) {
  EXPECT_THROW(psi_chf(0.0, 1.0, 1.0), DomainError);
  EXPECT_THROW(psi_chf(1.0 / 6.0, 1.0, -1.0), DomainError);
}

}  // namespace
}  // namespace stable_msu
