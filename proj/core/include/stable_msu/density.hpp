#pragma once

#include <vector>

#include "stable_msu/alpha.hpp"

namespace stable_msu {

/// Truncation and reliability policy for the Humbert-Pollard series.
struct SeriesConfig {
  int max_terms = 2000;
  /// Stop once the term envelope stays below rel_tol * |partial sum| for
  /// three consecutive terms past its peak.
  double rel_tol = 1e-15;
  /// Largest tolerated max|term| / |sum| in double precision.
  double cancellation_guard = 1e8;
  /// Significand width. 53 selects plain doubles; anything wider runs the
  /// series in MPFR and scales the guard by 2^(precision_bits - 53).
  int precision_bits = 53;

  /// Throws DomainError on an invalid configuration.
  void validate() const;
};

struct EvalResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  int terms_used = 0;
  /// False when the cancellation guard tripped or max_terms ran out first.
  bool reliable = false;
};

/// f, f' and f'' at one point, all from a single pass over the series.
struct DensityJet {
  EvalResult f;
  EvalResult fp;
  EvalResult fpp;
  double x = 0.0;
};

/// Raw series sums S0 = f, S1 = x f', S2 = x^2 f'' + x f' with absolute
/// error estimates. Reliability is judged on S0 alone.
struct JetSums {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0;
  double e0 = 0.0, e1 = 0.0, e2 = 0.0;
  int terms_used = 0;
  double cancellation_ratio = 0.0;
  bool reliable = false;
};

/// Humbert-Pollard series of one positive stable law with its coefficient
/// table precomputed, for repeated evaluation at many points. Immutable
/// after construction and safe to share between threads.
class StableSeries {
 public:
  explicit StableSeries(const Alpha& alpha, const SeriesConfig& cfg = {});

  [[nodiscard]] const Alpha& alpha() const { return alpha_; }
  [[nodiscard]] const SeriesConfig& config() const { return cfg_; }

  [[nodiscard]] JetSums sums(double x) const;
  [[nodiscard]] EvalResult density(double x) const;
  [[nodiscard]] DensityJet jet(double x) const;
  /// P(Z > x) from the termwise-integrated series.
  [[nodiscard]] EvalResult survival(double x) const;

 private:
  Alpha alpha_;
  SeriesConfig cfg_;
  std::vector<double> log_coef_;  // log(Gamma(1+alpha n) / (pi n!)), index n-1
  std::vector<double> sine_;      // (-1)^(n-1) sin(pi alpha n)
};

/// f_alpha(x) by the sine form of the Humbert-Pollard series with
/// compensated summation. Throws DomainError for x <= 0.
EvalResult density_series(const Alpha& alpha, double x, const SeriesConfig& cfg = {});

/// f, f', f'' from the three termwise-differentiated series.
DensityJet density_jet(const Alpha& alpha, double x, const SeriesConfig& cfg = {});

/// Closed forms for alpha in {1/3, 1/2, 2/3}; throws DomainError otherwise.
/// The 2/3 form is normalised by matching the series at x = 2.
EvalResult density_closed(const Alpha& alpha, double x);

/// Normalising constant of the 2/3 closed form x^{-1} e^{-z/2} W_{1/2,1/6}(z),
/// z = 4/(27 x^2), obtained by one-point calibration against the series.
double two_thirds_normalization();

/// alpha / Gamma(1 - alpha), the limit of f(x) x^{1+alpha} as x -> inf.
double tail_coefficient(const Alpha& alpha);

/// Lower end of the reliable domain of density_series: the bisected
/// reliability threshold widened by 1% so nearby points are reliable too.
double reliable_lower_bound(const Alpha& alpha, const SeriesConfig& cfg = {});

struct LaplaceCheck {
  double discrepancy = 0.0;  // |integral - exp(-lambda^alpha)|
  double integral = 0.0;
  double expected = 0.0;
  double lower_cutoff = 0.0;  // reliable lower bound of the series
  double lower_mass = 0.0;    // P(Z <= lower_cutoff), from the Kanter integral
  double quadrature_error = 0.0;
  bool reliable = false;
};

/// Compares the Laplace transform of the series density with exp(-lambda^alpha).
/// The series covers [lower_cutoff, inf). Below the cutoff the transform is
/// integrated by parts against kanter_cdf, since the series is unreliable there.
LaplaceCheck laplace_check(const Alpha& alpha, double lambda, const SeriesConfig& cfg = {});

}  // namespace stable_msu
