#include "stable_msu/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "stable_msu/errors.hpp"
#include "stable_msu/quadrature.hpp"
#include "stable_msu/summation.hpp"

namespace stable_msu {
namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

// log Gamma(x) for x >= 1/2.
double lanczos_log_gamma(double x) {
  x -= 1.0;
  double a = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) a += kLanczos[i] / (x + static_cast<double>(i));
  const double t = x + kLanczosG + 0.5;
  return 0.5 * std::log(2 * std::numbers::pi) + (x + 0.5) * std::log(t) - t + std::log(a);
}

const double kInvGammaSixth = 1.0 / gamma_fn(1.0 / 6.0);

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::series: return "series";
    case Method::quadrature: return "quadrature";
    case Method::recurrence: return "recurrence";
    case Method::closed_form: return "closed_form";
  }
  return "unknown";
}

double sin_pi(double v) {
  double r = std::fmod(v, 2.0);
  if (r < 0) r += 2.0;
  if (r == 0.0 || r == 1.0) return 0.0;
  double sign = 1.0;
  if (r > 1.0) {
    r -= 1.0;
    sign = -1.0;
  }
  if (r > 0.5) r = 1.0 - r;
  return sign * std::sin(std::numbers::pi * r);
}

double cos_pi(double v) {
  double r = std::fmod(std::abs(v), 2.0);
  if (r == 0.5 || r == 1.5) return 0.0;
  if (r > 1.0) r = 2.0 - r;
  if (r > 0.5) return -std::cos(std::numbers::pi * (1.0 - r));
  return std::cos(std::numbers::pi * r);
}

LogGammaEval log_gamma(double x) {
  if (!std::isfinite(x)) throw DomainError("log_gamma: non-finite argument");
  if (x <= 0.0 && x == std::floor(x)) {
    throw PoleError("log_gamma: pole at nonpositive integer " + std::to_string(x));
  }
  LogGammaEval out;
  out.method = Method::series;
  if (x >= 0.5) {
    out.value = lanczos_log_gamma(x);
    out.sign = 1;
    const double t = x + kLanczosG;
    out.abs_error_estimate = 8 * kUnitRoundoff * (std::abs(x * std::log(t)) + t + 1.0);
    return out;
  }
  // Gamma(x) Gamma(1-x) = pi / sin(pi x); Gamma(1-x) > 0 here.
  const double s = sin_pi(x);
  const double lg1mx = lanczos_log_gamma(1.0 - x);
  out.value = std::log(std::numbers::pi / std::abs(s)) - lg1mx;
  out.sign = s > 0 ? 1 : -1;
  const double t = 1.0 - x + kLanczosG;
  out.abs_error_estimate =
      8 * kUnitRoundoff * (std::abs((1.0 - x) * std::log(t)) + t + 1.0 + std::abs(out.value));
  return out;
}

double gamma_fn(double x) {
  const auto lg = log_gamma(x);
  return lg.sign * std::exp(lg.value);
}

SpecEval bessel_k(double nu, double x, double rel_tol) {
  if (!(x > 0.0)) throw DomainError("bessel_k: x must be positive");
  nu = std::abs(nu);
  // Truncate where exp(-x cosh t + nu t) is far below the smallest double.
  double upper = std::acosh(std::max(2.0, 750.0 / x));
  while (x * std::cosh(upper) - nu * upper < 750.0) upper += 0.5;
  auto integrand = [=](double t) {
    const double c = -x * std::cosh(t);
    return 0.5 * (std::exp(c + nu * t) + std::exp(c - nu * t));
  };
  const auto r = quad::tanh_sinh(integrand, 0.0, upper, {.rel_tol = rel_tol, .max_levels = 12});
  return {r.value, r.abs_error_estimate + 4 * kUnitRoundoff * std::abs(r.value), Method::quadrature};
}

SpecEval psi_chf(double a, double c, double x, double rel_tol) {
  if (!(a > 0.0)) throw DomainError("psi_chf: a must be positive");
  if (!(x > 0.0)) throw DomainError("psi_chf: x must be positive");
  const double b = c - a - 1.0;
  auto integrand = [=](double s) {
    return std::exp(-x * s + (a - 1.0) * std::log(s) + b * std::log1p(s));
  };
  const auto r = quad::exp_sinh(integrand, 0.0, {.rel_tol = rel_tol, .max_levels = 12});
  const double v = r.value * kInvGammaSixth;
  return {v, r.abs_error_estimate * kInvGammaSixth + 4 * kUnitRoundoff * std::abs(v),
          Method::quadrature};
}

SpecEval u_lambda(double lambda, double x, double rel_tol) {
  return psi_chf(1.0 / 6.0, lambda / 3.0, x, rel_tol);
}

SpecEval whittaker_w_stable(double z, double rel_tol) {
  if (!(z > 0.0)) throw DomainError("whittaker_w_stable: argument must be positive");
  const auto u4 = u_lambda(4.0, z, rel_tol);
  const double pre = std::exp(-z / 2 + (2.0 / 3.0) * std::log(z));
  return {pre * u4.value, pre * u4.abs_error_estimate, Method::quadrature};
}

}  // namespace stable_msu
