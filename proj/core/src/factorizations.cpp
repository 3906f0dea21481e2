#include "stable_msu/factorizations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "stable_msu/errors.hpp"
#include "stable_msu/kanter.hpp"
#include "stable_msu/quadrature.hpp"
#include "stable_msu/summation.hpp"

namespace stable_msu {
namespace {

double lgam(double x) { return log_gamma(x).value; }

double log_add_exp(double a, double b) {
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

double ratio(long long num, long long den) { return static_cast<double>(num) / static_cast<double>(den); }

}  // namespace

RandomSource RandomSource::from_entropy() {
  std::random_device rd;
  const std::uint64_t seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  return RandomSource(seed);
}

double RandomSource::exponential() { return -std::log(uniform()); }

double RandomSource::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u = 0.0, v = 0.0, s = 0.0;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double m = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * m;
  has_spare_ = true;
  return u * m;
}

double kanter_b(const Alpha& alpha, double u) {
  if (!(u > 0.0 && u < std::numbers::pi)) throw DomainError("kanter_b: u must lie in (0, pi)");
  return std::exp(log_kanter_b(alpha.value(), u));
}

double sample_log_stable(const Alpha& alpha, RandomSource& rng) {
  const double a = alpha.value();
  const double u = std::numbers::pi * rng.uniform();
  const double l = rng.exponential();
  return log_kanter_b(a, u) / a + (a - 1.0) / a * std::log(l);
}

double sample_stable(const Alpha& alpha, RandomSource& rng) { return std::exp(sample_log_stable(alpha, rng)); }

double sample_log_gamma(double c, RandomSource& rng) {
  if (!(c > 0.0)) throw DomainError("sample_gamma: shape must be positive");
  if (c < 1.0) {
    // G(c) = G(c+1) U^{1/c}
    return sample_log_gamma(c + 1.0, rng) + std::log(rng.uniform()) / c;
  }
  const double d = c - 1.0 / 3.0;
  const double k = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = rng.normal();
    const double t = 1.0 + k * x;
    if (t <= 0.0) continue;
    const double v = t * t * t;
    const double log_u = std::log(rng.uniform());
    if (log_u < 0.5 * x * x + d - d * v + d * std::log(v)) return std::log(d * v);
  }
}

double sample_gamma(double c, RandomSource& rng) { return std::exp(sample_log_gamma(c, rng)); }

double sample_log_beta(double a, double b, RandomSource& rng) {
  const double la = sample_log_gamma(a, rng);
  const double lb = sample_log_gamma(b, rng);
  return la - log_add_exp(la, lb);
}

Factor Factor::beta(double a, double b) {
  if (!(a > 0.0 && b > 0.0)) throw DomainError("Factor::beta: parameters must be positive");
  return Factor{Kind::beta, a, b};
}

Factor Factor::gamma(double c) {
  if (!(c > 0.0)) throw DomainError("Factor::gamma: shape must be positive");
  return Factor{Kind::gamma, c, 0.0};
}

FactorList williams_product(int p) {
  if (p < 2) throw DomainError("williams_product: p must be >= 2");
  FactorList fl;
  fl.scale = std::pow(static_cast<double>(p), p);
  for (int k = 1; k < p; ++k) fl.factors.push_back(Factor::gamma(ratio(k, p)));
  fl.represents = "Z_{1/" + std::to_string(p) + "}^{-1}";
  return fl;
}

FactorList lemma2_product(int p, int n) {
  if (p < 2) throw DomainError("lemma2_product: p must be >= 2");
  if (n <= 2 * p) {
    throw PreconditionError("lemma2_product: need n > 2p, got p = " + std::to_string(p) + ", n = " + std::to_string(n));
  }
  FactorList fl;
  fl.scale = std::exp(n * std::log(static_cast<double>(n)) - p * std::log(static_cast<double>(p)));
  for (int k = 1; k < p; ++k) {
    // k/p - 2k/n = k (n - 2p) / (p n), formed in integers
    fl.factors.push_back(Factor::beta(ratio(2LL * k, n), ratio(static_cast<long long>(k) * (n - 2 * p),
                                                               static_cast<long long>(p) * n)));
    fl.factors.push_back(Factor::gamma(ratio(2LL * k - 1, n)));
  }
  for (int j = 2 * p - 1; j < n; ++j) fl.factors.push_back(Factor::gamma(ratio(j, n)));
  const long long g = std::gcd(p, n);
  fl.represents = "Z_{" + std::to_string(p / g) + "/" + std::to_string(n / g) + "}^{-" + std::to_string(p) + "}";
  return fl;
}

double sample_log_product(const FactorList& fl, RandomSource& rng) {
  double s = std::log(fl.scale);
  for (const Factor& f : fl.factors) {
    s += f.kind == Factor::Kind::gamma ? sample_log_gamma(f.a, rng) : sample_log_beta(f.a, f.b, rng);
  }
  return s;
}

double MellinProfile::log_at(double s) const {
  if (!(s > lower && s < upper)) {
    throw DomainError("MellinProfile: s = " + std::to_string(s) + " outside the validity interval");
  }
  return log_moment(s);
}

double MellinProfile::operator()(double s) const { return std::exp(log_at(s)); }

MellinProfile mellin_stable(const Alpha& alpha) {
  const double a = alpha.value();
  MellinProfile m;
  m.lower = -std::numeric_limits<double>::infinity();
  m.upper = a;
  m.log_moment = [a](double s) { return lgam(1.0 - s / a) - lgam(1.0 - s); };
  return m;
}

MellinProfile mellin_product(const FactorList& fl) {
  if (!(fl.scale > 0.0)) throw DomainError("mellin_product: scale must be positive");
  MellinProfile m;
  m.lower = -std::numeric_limits<double>::infinity();
  m.upper = std::numeric_limits<double>::infinity();
  for (const Factor& f : fl.factors) m.lower = std::max(m.lower, -f.a);
  m.log_moment = [fl](double s) {
    CompensatedSum<double> acc;
    acc.add(s * std::log(fl.scale));
    for (const Factor& f : fl.factors) {
      if (f.kind == Factor::Kind::gamma) {
        acc.add(lgam(s + f.a));
        acc.add(-lgam(f.a));
      } else {
        acc.add(lgam(s + f.a));
        acc.add(lgam(f.a + f.b));
        acc.add(-lgam(s + f.a + f.b));
        acc.add(-lgam(f.a));
      }
    }
    return acc.value();
  };
  return m;
}

SpecEval lemma1_g(double a, double b, double c, int shift, double x) {
  if (!(a > 0.0 && b > 0.0)) throw DomainError("lemma1_g: alpha and beta must be positive");
  if (shift < -1 || shift > 1) throw DomainError("lemma1_g: shift must be -1, 0 or 1");
  if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("lemma1_g: x must be finite and >= 0");
  const double cs = c + shift;
  if (x == 0.0 && !(cs < a)) {
    throw DivergenceError("lemma1_g: integral diverges at x = 0 unless c + shift < alpha");
  }
  const double e = cs - a - b;
  auto integrand = [=](double u) { return std::exp(-x * u + (b - 1.0) * std::log(u) + e * std::log1p(u)); };
  quad::Options opts;
  opts.rel_tol = 1e-13;
  opts.max_levels = 12;
  const quad::Result r = quad::exp_sinh(integrand, 0.0, opts);
  const double pre = std::exp(-x);
  return SpecEval{pre * r.value, pre * r.abs_error_estimate + 8 * kUnitRoundoff * pre * std::abs(r.value),
                  Method::quadrature};
}

double beta_gamma_product_density(double a, double b, double c, double x) {
  if (!(x > 0.0)) throw DomainError("beta_gamma_product_density: x must be positive");
  const SpecEval g = lemma1_g(a, b, c, 0, x);
  return std::exp(lgam(a + b) - lgam(a) - lgam(b) - lgam(c) + (c - 1.0) * std::log(x)) * g.value;
}

SpecEval lemma1_inequality(double a, double b, double c, double x) {
  if (!(b <= 1.0)) throw PreconditionError("lemma1_inequality: requires beta <= 1");
  if (!(a + b >= c)) throw PreconditionError("lemma1_inequality: requires alpha + beta >= c");
  const SpecEval gm = lemma1_g(a, b, c, -1, x);
  const SpecEval g0 = lemma1_g(a, b, c, 0, x);
  const SpecEval gp = lemma1_g(a, b, c, 1, x);
  const double left = x * g0.value + (a + b - c) * gm.value;
  const double right = gp.value - g0.value;
  const double left_err = x * g0.abs_error_estimate + (a + b - c) * gm.abs_error_estimate;
  const double right_err = gp.abs_error_estimate + g0.abs_error_estimate;
  SpecEval out;
  out.method = Method::quadrature;
  out.value = left * right - (b - 1.0) * gm.value * gm.value;
  out.abs_error_estimate = left_err * std::abs(right) + std::abs(left) * right_err +
                           2 * std::abs(b - 1.0) * gm.value * gm.abs_error_estimate +
                           4 * kUnitRoundoff * (std::abs(left * right) + std::abs((b - 1.0) * gm.value * gm.value));
  return out;
}

SpecEval whitt_margin(double x) {
  if (!(x > 0.0)) throw DomainError("whitt_margin: x must be positive");
  constexpr double kTol = 1e-12;
  const SpecEval u1 = u_lambda(1.0, x, kTol);
  const SpecEval u4 = u_lambda(4.0, x, kTol);
  const SpecEval u7 = u_lambda(7.0, x, kTol);
  const double p = x * u4.value - u1.value / 6.0;
  const double q = u7.value - u4.value;
  const double p_err = x * u4.abs_error_estimate + u1.abs_error_estimate / 6.0;
  const double q_err = u7.abs_error_estimate + u4.abs_error_estimate;
  SpecEval out;
  out.method = Method::quadrature;
  out.value = p * q + 5.0 * u4.value * u4.value / 6.0;
  out.abs_error_estimate = p_err * std::abs(q) + std::abs(p) * q_err + 5.0 / 3.0 * u4.value * u4.abs_error_estimate +
                           4 * kUnitRoundoff * (std::abs(p * q) + u4.value * u4.value);
  return out;
}

std::optional<WhittViolation> whitt_violation_scan(double x_lo, double x_hi, int points) {
  if (!(x_lo > 0.0 && x_hi > x_lo) || points < 2) throw DomainError("whitt_violation_scan: invalid grid");
  std::optional<WhittViolation> best;
  for (int i = 0; i < points; ++i) {
    const double x = x_lo * std::pow(x_hi / x_lo, static_cast<double>(i) / (points - 1));
    const SpecEval m = whitt_margin(x);
    if (m.value < -m.abs_error_estimate && (!best || m.value < best->margin.value)) best = WhittViolation{x, m};
  }
  return best;
}

}  // namespace stable_msu
