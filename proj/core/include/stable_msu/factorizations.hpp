#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "stable_msu/alpha.hpp"
#include "stable_msu/specfun.hpp"

namespace stable_msu {

/// Seedable uniform/exponential/normal source over mt19937_64.
/// Not thread-safe; use one instance per worker.
class RandomSource {
 public:
  static constexpr std::uint64_t kDefaultSeed = 20240229;

  explicit RandomSource(std::uint64_t seed = kDefaultSeed) : engine_(seed) {}
  static RandomSource from_entropy();

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1p-53; }
  double exponential();
  double normal();
  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// b_alpha(u) = (sin(alpha u)/sin u)^alpha (sin((1-alpha)u)/sin u)^(1-alpha).
/// Throws DomainError unless 0 < u < pi.
double kanter_b(const Alpha& alpha, double u);

/// Z_alpha = b(U)^{1/alpha} L^{(alpha-1)/alpha}, U uniform on (0, pi), L ~ Exp(1).
double sample_stable(const Alpha& alpha, RandomSource& rng);
/// log Z_alpha, sampled without leaving the log domain.
double sample_log_stable(const Alpha& alpha, RandomSource& rng);

/// Gamma(c) with unit scale (density y^{c-1} e^{-y} / Gamma(c)), Marsaglia-Tsang.
double sample_gamma(double c, RandomSource& rng);
double sample_log_gamma(double c, RandomSource& rng);
/// log of a Beta(a, b) draw, via two Gamma variables.
double sample_log_beta(double a, double b, RandomSource& rng);

struct Factor {
  enum class Kind { beta, gamma };
  Kind kind = Kind::gamma;
  double a = 1.0;  // Beta first parameter, or the Gamma shape
  double b = 0.0;  // Beta second parameter; unused for Gamma

  static Factor beta(double a, double b);
  static Factor gamma(double c);
  friend bool operator==(const Factor&, const Factor&) = default;
};

/// Independent product scale * X_1 * ... * X_k of Beta and Gamma factors.
struct FactorList {
  double scale = 1.0;
  std::vector<Factor> factors;
  std::string represents;
};

/// Z_{1/p}^{-1} = p^p Gamma(1/p) ... Gamma((p-1)/p). Throws DomainError for p < 2.
FactorList williams_product(int p);

/// Z_{p/n}^{-p} = n^n/p^p prod_{k<p} Beta(2k/n, k/p - 2k/n) Gamma((2k-1)/n)
///               * prod_{j=2p-1}^{n-1} Gamma(j/n).
/// Throws DomainError for p < 2 and PreconditionError unless n > 2p.
FactorList lemma2_product(int p, int n);

double sample_log_product(const FactorList& fl, RandomSource& rng);

/// s -> E[X^s] on the open interval (lower, upper).
struct MellinProfile {
  std::function<double(double)> log_moment;
  double lower = 0.0;
  double upper = 0.0;

  /// Throws DomainError outside (lower, upper).
  [[nodiscard]] double operator()(double s) const;
  [[nodiscard]] double log_at(double s) const;
};

/// E[Z_alpha^s] = Gamma(1 - s/alpha) / Gamma(1 - s) for s < alpha.
MellinProfile mellin_stable(const Alpha& alpha);

/// scale^s times the factor moments: Gamma(s+c)/Gamma(c) for Gamma(c) and
/// Gamma(s+a) Gamma(a+b) / (Gamma(s+a+b) Gamma(a)) for Beta(a, b).
MellinProfile mellin_product(const FactorList& fl);

/// g_{a,b,c+shift}(x) = e^{-x} int_0^inf e^{-xu} u^{b-1} (u+1)^{c+shift-a-b} du.
/// Throws DomainError for nonpositive a or b, shift outside {-1,0,1} or x < 0,
/// and DivergenceError at x = 0 unless c + shift < a.
SpecEval lemma1_g(double a, double b, double c, int shift, double x);

/// Density at x of X * Y with X ~ Beta(a, b), Y ~ Gamma(c) independent:
/// Gamma(a+b) / (Gamma(a) Gamma(b) Gamma(c)) x^{c-1} g_{a,b,c}(x).
double beta_gamma_product_density(double a, double b, double c, double x);

/// (x g_c + (a+b-c) g_{c-1}) (g_{c+1} - g_c) - (b-1) g_{c-1}^2, expected >= 0.
/// Throws PreconditionError unless b <= 1 and a + b >= c.
SpecEval lemma1_inequality(double a, double b, double c, double x);

/// (x U_4 - U_1/6)(U_7 - U_4) + 5 U_4^2 / 6, with U_l = Psi(1/6, l/3, .).
SpecEval whitt_margin(double x);

struct WhittViolation {
  double x = 0.0;
  SpecEval margin;
};

/// Most negative margin on `points` log-spaced x in [x_lo, x_hi] whose value
/// is below minus its error estimate; empty if there is none.
std::optional<WhittViolation> whitt_violation_scan(double x_lo, double x_hi, int points);

}  // namespace stable_msu
