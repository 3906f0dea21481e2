#pragma once

#include <cmath>
#include <functional>

namespace stable_msu::quad {

struct Options {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int max_levels = 10;
};

/// Integral value together with the difference between the last two
/// refinement levels.
struct Result {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  int levels = 0;
  int evaluations = 0;
  bool converged = false;
};

using Integrand = std::function<double(double)>;

/// Double-exponential (tanh-sinh) quadrature on a finite interval [a, b].
/// Nodes approach the endpoints to within the resolution of the endpoint
/// itself, so integrable power singularities at a = 0 are resolved.
Result tanh_sinh(const Integrand& f, double a, double b, const Options& opts = {});

/// Exp-sinh quadrature on [a, +inf). Handles algebraic singularities at a
/// and algebraic or exponential decay at infinity.
Result exp_sinh(const Integrand& f, double a, const Options& opts = {});

/// Fixed 10-point Gauss-Legendre rule on [a, b]; no error estimate.
double gauss_legendre(const Integrand& f, double a, double b);

/// Golden-section maximisation of a unimodal function on [a, b].
double golden_section_max(const std::function<double(double)>& f, double a, double b,
                          double x_tol);

/// Bisection for a sign change of f on [a, b]; requires f(a)*f(b) <= 0.
double bisect_root(const std::function<double(double)>& f, double a, double b, double x_tol);

}  // namespace stable_msu::quad
