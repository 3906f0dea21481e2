#pragma once

#include <string_view>

namespace stable_msu {

enum class Method { series, quadrature, recurrence, closed_form };

std::string_view to_string(Method m);

/// A special-function value with an absolute error estimate.
struct SpecEval {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  Method method = Method::closed_form;
};

/// log|Gamma(x)| together with the sign of Gamma(x).
struct LogGammaEval : SpecEval {
  int sign = 1;
};

/// Lanczos approximation (g = 7, 9 terms) for x >= 1/2 and the reflection
/// formula below it. Throws PoleError at nonpositive integers.
LogGammaEval log_gamma(double x);

/// Gamma(x) as a plain double (sign * exp(log|Gamma|)).
double gamma_fn(double x);

/// Modified Bessel function of the second kind (Macdonald function),
/// K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt, by tanh-sinh quadrature.
/// K_{-nu} = K_nu, so any real order is accepted. Throws DomainError for x <= 0.
SpecEval bessel_k(double nu, double x, double rel_tol = 1e-10);

/// Confluent hypergeometric function of the second kind,
///   Psi(a, c, x) = Gamma(1/6)^{-1} int_0^inf exp(-x s) s^{a-1} (1+s)^{c-a-1} ds.
/// The prefactor is the constant 1/Gamma(1/6), not 1/Gamma(a); the two agree
/// for a = 1/6, which is the only parameter used by the stable-law formulas.
/// Throws DomainError if a <= 0 or x <= 0.
SpecEval psi_chf(double a, double c, double x, double rel_tol = 1e-10);

/// U_lambda(x) = Psi(1/6, lambda/3, x).
SpecEval u_lambda(double lambda, double x, double rel_tol = 1e-10);

/// Whittaker function W_{1/2,1/6}(z) = e^{-z/2} z^{2/3} U_4(z).
SpecEval whittaker_w_stable(double z, double rel_tol = 1e-10);

}  // namespace stable_msu
