#pragma once

#include "stable_msu/alpha.hpp"
#include "stable_msu/density.hpp"

namespace stable_msu {

/// log b_alpha(u), b_alpha(u) = (sin(alpha u)/sin u)^alpha (sin((1-alpha)u)/sin u)^(1-alpha).
/// Finite on the open interval (0, pi).
double log_kanter_b(double alpha, double u);

/// P(Z_alpha <= x) = (1/pi) int_0^pi exp(-b(u)^{1/(1-alpha)} x^{-alpha/(1-alpha)}) du,
/// accurate in relative terms for small x where the series cancels badly.
EvalResult kanter_cdf(const Alpha& alpha, double x);

/// f and f' from the same integral representation, differentiated under the
/// integral sign. All integrand terms are bounded for small x, so this route
/// stays accurate below the reliable domain of the series.
struct KanterJet {
  EvalResult f;
  EvalResult fp;
};
KanterJet kanter_density_jet(const Alpha& alpha, double x);

}  // namespace stable_msu
