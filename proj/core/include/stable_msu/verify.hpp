#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "stable_msu/alpha.hpp"
#include "stable_msu/density.hpp"

namespace stable_msu {

/// Asymptotic 1% Kolmogorov-Smirnov coefficient.
inline constexpr double kKsCoefficient1pct = 1.628;

struct KsResult {
  double statistic = 0.0;
  std::size_t n_samples = 0;
  double critical_1pct = 0.0;
  bool pass = false;
};

/// sup |F_n - F|. Takes the samples by value and sorts them.
/// Throws DomainError on an empty sample.
KsResult ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf);

/// sup |F_n - G_m| with critical value 1.628 sqrt((n+m)/(n m)).
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Monotone piecewise-cubic Hermite interpolant of tabulated CDF values.
/// Node slopes are the supplied densities (or finite differences when none
/// are given), limited by the Fritsch-Carlson condition so the interpolant
/// stays monotone. Outside the table the supplied tail functions are used.
class TabulatedCdf {
 public:
  TabulatedCdf(std::vector<double> nodes, std::vector<double> values, std::vector<double> slopes,
               std::function<double(double)> below, std::function<double(double)> above);

  [[nodiscard]] double operator()(double t) const;
  [[nodiscard]] double lower() const { return nodes_.front(); }
  [[nodiscard]] double upper() const { return nodes_.back(); }

 private:
  std::vector<double> nodes_, values_, slopes_;
  std::function<double(double)> below_, above_;
};

/// CDF of log Z_alpha as a function of t = log z. Built by cumulative
/// 10-point Gauss-Legendre quadrature of f(e^t) e^t over the reliable domain
/// of the series, anchored at the top by the survival series. Above the
/// table it is 1 - survival(e^t); below it the table's first value times
/// e^{t - t_min}, which stays under the true CDF's bound there.
TabulatedCdf stable_log_cdf(const Alpha& alpha, const SeriesConfig& cfg = {}, int cells = 2000);

/// CDF of u_alpha by cumulative quadrature of ualpha_density on [-L, L],
/// L = 30/alpha, with exponential tails beyond.
TabulatedCdf ualpha_cdf_table(const Alpha& alpha, int cells = 4000);

struct IdentityReport {
  std::string name;
  double discrepancy = 0.0;
  double threshold = 0.0;
  bool pass = false;
  nlohmann::json details;
};

/// Derives an independent stream seed from a base seed and a stream index (splitmix64).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// log Z - log Z' for n independent pairs against the u_alpha CDF. The
/// discrepancy is sqrt(n) times the KS statistic; the threshold is the KS
/// coefficient (1.628 at the 1% level). Throws DomainError for fewer than
/// 10000 samples.
IdentityReport check_diff_identity(const Alpha& alpha, std::size_t n_samples, std::uint64_t seed,
                                   double ks_coefficient = kKsCoefficient1pct);

/// Largest laplace_check discrepancy over lambdas. Throws DomainError for a negative lambda.
IdentityReport check_laplace(const Alpha& alpha, const std::vector<double>& lambdas, double threshold = 1e-5,
                             const SeriesConfig& cfg = {});

/// Two-sample KS between -p log Z_{p/n} (Kanter) and the log of the sampled
/// factor product; discrepancy is the KS statistic times sqrt(n m / (n + m)).
/// Throws PreconditionError unless n > 2p.
IdentityReport check_factorization_mc(int p, int n, std::size_t n_samples, std::uint64_t seed,
                                      double ks_coefficient = kKsCoefficient1pct);

/// One-sample KS of Kanter draws of log Z against stable_log_cdf.
IdentityReport check_sampler_ks(const Alpha& alpha, std::size_t n_samples, std::uint64_t seed,
                                double ks_coefficient = kKsCoefficient1pct);

}  // namespace stable_msu
