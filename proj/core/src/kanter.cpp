#include "stable_msu/kanter.hpp"

#include <cmath>
#include <numbers>

#include "stable_msu/errors.hpp"
#include "stable_msu/quadrature.hpp"

namespace stable_msu {

double log_kanter_b(double alpha, double u) {
  const double s = std::sin(u);
  return alpha * std::log(std::sin(alpha * u) / s) +
         (1.0 - alpha) * std::log(std::sin((1.0 - alpha) * u) / s);
}

EvalResult kanter_cdf(const Alpha& alpha, double x) {
  if (!(x > 0.0)) throw DomainError("kanter_cdf: x must be positive");
  const double a = alpha.value();
  const double k = a / (1.0 - a);
  const double log_x = std::log(x);
  auto integrand = [&](double u) {
    return std::exp(-std::exp(log_kanter_b(a, u) / (1.0 - a) - k * log_x));
  };
  quad::Options opts;
  opts.rel_tol = 1e-12;
  opts.abs_tol = 1e-290;  // deep left tail: the integrals underflow together with the answer
  opts.max_levels = 12;
  const quad::Result r = quad::tanh_sinh(integrand, 0.0, std::numbers::pi, opts);
  return EvalResult{r.value / std::numbers::pi, r.abs_error_estimate / std::numbers::pi, r.evaluations,
                    r.converged};
}

KanterJet kanter_density_jet(const Alpha& alpha, double x) {
  if (!(x > 0.0)) throw DomainError("kanter_density_jet: x must be positive");
  const double a = alpha.value();
  const double k = a / (1.0 - a);
  const double log_x = std::log(x);
  // With E = b^{1/(1-a)} x^{-k}: f = (1/pi) int (k/x) E e^{-E} du and
  // f' = (1/pi) int (k/x^2) E e^{-E} (k E - k - 1) du.
  auto e_of = [&](double u) { return std::exp(log_kanter_b(a, u) / (1.0 - a) - k * log_x); };
  auto f_integrand = [&](double u) {
    const double e = e_of(u);
    return e * std::exp(-e);
  };
  auto fp_integrand = [&](double u) {
    const double e = e_of(u);
    return e * std::exp(-e) * (k * e - k - 1.0);
  };
  quad::Options opts;
  opts.rel_tol = 1e-12;
  opts.abs_tol = 1e-290;  // deep left tail: the integrals underflow together with the answer
  opts.max_levels = 12;
  const quad::Result rf = quad::tanh_sinh(f_integrand, 0.0, std::numbers::pi, opts);
  const quad::Result rp = quad::tanh_sinh(fp_integrand, 0.0, std::numbers::pi, opts);
  const double cf = k / (x * std::numbers::pi);
  const double cp = cf / x;
  KanterJet j;
  j.f = EvalResult{cf * rf.value, cf * rf.abs_error_estimate, rf.evaluations, rf.converged};
  j.fp = EvalResult{cp * rp.value, cp * rp.abs_error_estimate, rp.evaluations, rp.converged};
  return j;
}

}  // namespace stable_msu
