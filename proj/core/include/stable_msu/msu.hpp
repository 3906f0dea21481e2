#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string_view>
#include <vector>

#include "stable_msu/alpha.hpp"
#include "stable_msu/density.hpp"

namespace stable_msu {

/// Log-concavity residual g(x) = (x^2 f'' + x f') f - x^2 f'^2.
/// t -> f(e^t) is log-concave at t = log x iff g(x) <= 0, and g/f^2 is the
/// second derivative of t -> log f(e^t).
EvalResult lce_residual(const Alpha& alpha, double x, const SeriesConfig& cfg = {});

/// Same residual from precomputed series sums.
EvalResult lce_residual(const JetSums& sums);

struct TailSign {
  double coefficient = 0.0;  // c(alpha) = alpha^2 / (2 Gamma(-alpha) Gamma(-2 alpha))
  bool msu_compatible = false;
};

/// Leading large-x behaviour g(x) ~ -c(alpha) x^{-(2+3 alpha)}.
/// Throws PoleError at alpha = 1/2, where Gamma(-2 alpha) has a pole.
TailSign tail_residual_sign(const Alpha& alpha);

enum class MsuClass { no_violation_found, violation_found };
std::string_view to_string(MsuClass c);

struct MsuReport {
  Alpha alpha{0.5};
  std::vector<double> grid;
  std::vector<EvalResult> residuals;
  /// g / f^2, NaN where the point is unreliable or f == 0.
  std::vector<double> normalized_residuals;
  MsuClass classification = MsuClass::no_violation_found;
  /// Grid point of largest g/f^2 among reliable points with g > its error.
  std::optional<double> witness;
  double mode_estimate = 0.0;
  /// True when the density still increases at the grid edge (mode outside the grid).
  bool mode_at_boundary = false;
  /// First zero of f'' beyond the mode.
  std::optional<double> inflection_estimate;
  /// g <= its error estimate on every reliable grid point up to the inflection point.
  bool residual_nonpositive_to_inflection = false;
  double unreliable_fraction = 0.0;
};

/// Scans g on `points` log-spaced x in [x_lo, x_hi]. Grid points are evaluated
/// in parallel on `threads` workers (0 = all cores). Throws DomainError if
/// more than half of the grid is unreliable or the arguments are invalid.
MsuReport msu_scan(const Alpha& alpha, double x_lo, double x_hi, int points,
                   const SeriesConfig& cfg = {}, int threads = 0);

/// int_0^x (f'(x-y) f(x) - f(x-y) f'(x)) y^{-alpha} dy, substituting
/// y = u^{1/(1-alpha)}. Inner arguments below the series' reliable domain are
/// evaluated from the Kanter representation.
EvalResult integral_criterion(const Alpha& alpha, double x, const SeriesConfig& cfg = {});

/// Truncated Brockwell-Brown expansion of the density of log Z.
struct BbExpansion {
  /// Taylor coefficients of 1/Gamma(1+z), b_0 .. b_J.
  std::vector<double> b_coeffs;
  /// R_0 .. R_J as ascending coefficient lists.
  std::vector<std::vector<double>> r_polys;
  int order = 0;
};

/// b_j from exp(gamma z + sum_{k>=2} (-1)^k zeta(k) z^k / k), computed at
/// 512 bits; R_j from R_{j+1} = R_j + x sum_m C(j,m) R_{j-m}.
/// Throws DomainError unless 1 <= J <= 60.
BbExpansion bb_expansion(int order);

using BigInt = boost::multiprecision::cpp_int;

/// R_0 .. R_J with exact integer coefficients.
std::vector<std::vector<BigInt>> r_polys_exact(int order);

/// P(y) = sum_j b_j alpha^{j+1} (-1)^j R_j(-y).
EvalResult bb_p(const Alpha& alpha, double y, const BbExpansion& e);
/// P'(y).
EvalResult bb_p_derivative(const Alpha& alpha, double y, const BbExpansion& e);

/// Density of log Z at t, y e^{-y} P(y) with y = e^{-alpha t}. The error
/// estimate is the last two retained terms plus Horner rounding; reliable
/// iff it is at most rel_tol * |value|.
EvalResult bb_log_density(const Alpha& alpha, double t, const BbExpansion& e, double rel_tol = 1e-8);

/// Density of log Z - log Z' for independent copies:
/// sin(pi a) / (pi (e^{a x} + 2 cos(pi a) + e^{-a x})).
double ualpha_density(const Alpha& alpha, double x);

/// 1 + cos(pi a) cosh(a x); u_alpha is log-concave at x iff this is >= 0.
double ualpha_logconcavity_margin(const Alpha& alpha, double x);

/// (log u_alpha)''(x) = -4 a^2 (1 + cos(pi a) cosh(a x)) / h(x)^2 with
/// h(x) = e^{a x} + 2 cos(pi a) + e^{-a x}.
double ualpha_log_second_derivative(const Alpha& alpha, double x);

/// Closed-form CDF of u_alpha: 1/2 + atan(tan(pi a / 2) tanh(a x / 2)) / (pi a).
double ualpha_cdf(const Alpha& alpha, double x);

}  // namespace stable_msu
