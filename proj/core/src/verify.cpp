#include "stable_msu/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "stable_msu/errors.hpp"
#include "stable_msu/factorizations.hpp"
#include "stable_msu/msu.hpp"
#include "stable_msu/quadrature.hpp"

namespace stable_msu {
namespace {

KsResult finish(double d, std::size_t n, double critical) {
  return KsResult{d, n, critical, d < critical};
}

// Fills values[i] = int_{nodes[0]}^{nodes[i]} g, cell by cell, and slopes[i] = g(nodes[i]).
void cumulative(const std::function<double(double)>& g, const std::vector<double>& nodes, std::vector<double>& values,
                std::vector<double>& slopes) {
  values.assign(nodes.size(), 0.0);
  slopes.resize(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) slopes[i] = g(nodes[i]);
  for (std::size_t i = 1; i < nodes.size(); ++i) values[i] = values[i - 1] + quad::gauss_legendre(g, nodes[i - 1], nodes[i]);
}

std::vector<double> uniform_nodes(double lo, double hi, int cells) {
  std::vector<double> t(static_cast<std::size_t>(cells) + 1);
  for (int i = 0; i <= cells; ++i) t[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / cells;
  t.back() = hi;
  return t;
}

IdentityReport ks_report(std::string name, const KsResult& ks, double scale, double coefficient) {
  IdentityReport r;
  r.name = std::move(name);
  r.discrepancy = ks.statistic * scale;
  r.threshold = coefficient;
  r.pass = r.discrepancy < r.threshold;
  r.details = {{"ks_statistic", ks.statistic}, {"n_samples", ks.n_samples}, {"critical_value", coefficient / scale}};
  return r;
}

}  // namespace

KsResult ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw DomainError("ks_one_sample: empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return finish(std::min(d, 1.0), samples.size(), kKsCoefficient1pct / std::sqrt(n));
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw DomainError("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double n = static_cast<double>(a.size());
  const double m = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  return finish(d, a.size() + b.size(), kKsCoefficient1pct * std::sqrt((n + m) / (n * m)));
}

TabulatedCdf::TabulatedCdf(std::vector<double> nodes, std::vector<double> values, std::vector<double> slopes,
                           std::function<double(double)> below, std::function<double(double)> above)
    : nodes_(std::move(nodes)), values_(std::move(values)), slopes_(std::move(slopes)), below_(std::move(below)),
      above_(std::move(above)) {
  const std::size_t n = nodes_.size();
  if (n < 2 || values_.size() != n || (!slopes_.empty() && slopes_.size() != n)) {
    throw DomainError("TabulatedCdf: need at least two nodes and matching value/slope arrays");
  }
  std::vector<double> secant(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (!(nodes_[k + 1] > nodes_[k]) || values_[k + 1] < values_[k]) {
      throw DomainError("TabulatedCdf: nodes must increase and values must not decrease");
    }
    secant[k] = (values_[k + 1] - values_[k]) / (nodes_[k + 1] - nodes_[k]);
  }
  if (slopes_.empty()) {
    slopes_.resize(n);
    slopes_.front() = secant.front();
    slopes_.back() = secant.back();
    for (std::size_t k = 1; k + 1 < n; ++k) slopes_[k] = 0.5 * (secant[k - 1] + secant[k]);
  }
  for (auto& s : slopes_) s = std::max(s, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (secant[k] == 0.0) {
      slopes_[k] = slopes_[k + 1] = 0.0;
      continue;
    }
    const double a = slopes_[k] / secant[k];
    const double b = slopes_[k + 1] / secant[k];
    const double r = a * a + b * b;
    if (r > 9.0) {
      const double tau = 3.0 / std::sqrt(r);
      slopes_[k] = tau * a * secant[k];
      slopes_[k + 1] = tau * b * secant[k];
    }
  }
}

double TabulatedCdf::operator()(double t) const {
  if (t < nodes_.front()) return below_(t);
  if (t > nodes_.back()) return above_(t);
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
  std::size_t k = static_cast<std::size_t>(it - nodes_.begin());
  k = k == 0 ? 0 : std::min(k - 1, nodes_.size() - 2);
  const double h = nodes_[k + 1] - nodes_[k];
  const double s = (t - nodes_[k]) / h;
  const double s2 = s * s, s3 = s2 * s;
  const double v = (2 * s3 - 3 * s2 + 1) * values_[k] + (s3 - 2 * s2 + s) * h * slopes_[k] +
                   (-2 * s3 + 3 * s2) * values_[k + 1] + (s3 - s2) * h * slopes_[k + 1];
  return std::clamp(v, 0.0, 1.0);
}

TabulatedCdf stable_log_cdf(const Alpha& alpha, const SeriesConfig& cfg, int cells) {
  if (cells < 2) throw DomainError("stable_log_cdf: need at least two cells");
  const StableSeries series(alpha, cfg);
  const double x_lo = reliable_lower_bound(alpha, cfg);
  double x_hi = std::max(50.0, 100.0 * x_lo);
  while (!series.survival(x_hi).reliable) x_hi *= 2.0;
  const double t_lo = std::log(x_lo);
  const double t_hi = std::log(x_hi);

  auto g = [&](double t) {
    const double x = std::exp(t);
    return series.density(x).value * x;
  };
  std::vector<double> nodes = uniform_nodes(t_lo, t_hi, cells);
  std::vector<double> values, slopes;
  cumulative(g, nodes, values, slopes);
  // Anchor at the top: F(t_hi) = 1 - S(x_hi).
  const double shift = 1.0 - series.survival(x_hi).value - values.back();
  for (auto& v : values) v = std::max(0.0, v + shift);
  for (std::size_t i = 1; i < values.size(); ++i) values[i] = std::max(values[i], values[i - 1]);

  const double f_lo = values.front();
  auto below = [f_lo, t_lo](double t) { return f_lo * std::exp(t - t_lo); };
  auto above = [series](double t) { return std::clamp(1.0 - series.survival(std::exp(t)).value, 0.0, 1.0); };
  return TabulatedCdf(std::move(nodes), std::move(values), std::move(slopes), below, above);
}

TabulatedCdf ualpha_cdf_table(const Alpha& alpha, int cells) {
  if (cells < 2) throw DomainError("ualpha_cdf_table: need at least two cells");
  const double a = alpha.value();
  const double half_width = 30.0 / a;
  // u ~ sin(pi a)/pi e^{-a|x|} in the tails
  const double tail_coef = std::sin(std::numbers::pi * a) / (std::numbers::pi * a);
  auto below = [=](double t) { return tail_coef * std::exp(a * t); };
  auto above = [=](double t) { return 1.0 - tail_coef * std::exp(-a * t); };
  auto g = [&](double t) { return ualpha_density(alpha, t); };
  std::vector<double> nodes = uniform_nodes(-half_width, half_width, cells);
  std::vector<double> values, slopes;
  cumulative(g, nodes, values, slopes);
  const double start = below(-half_width);
  for (auto& v : values) v += start;
  return TabulatedCdf(std::move(nodes), std::move(values), std::move(slopes), below, above);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

IdentityReport check_diff_identity(const Alpha& alpha, std::size_t n_samples, std::uint64_t seed,
                                   double ks_coefficient) {
  if (n_samples < 10000) throw DomainError("check_diff_identity: need at least 10000 samples");
  RandomSource rng(seed);
  std::vector<double> diffs(n_samples);
  for (auto& d : diffs) {
    const double y1 = sample_log_stable(alpha, rng);
    const double y2 = sample_log_stable(alpha, rng);
    d = y1 - y2;
  }
  std::vector<double> negated(diffs.size());
  std::transform(diffs.begin(), diffs.end(), negated.begin(), [](double v) { return -v; });

  const TabulatedCdf cdf = ualpha_cdf_table(alpha);
  const KsResult ks = ks_one_sample(diffs, std::cref(cdf));
  const double n = static_cast<double>(n_samples);
  IdentityReport r = ks_report("diff_identity alpha=" + alpha.to_string(), ks, std::sqrt(n), ks_coefficient);
  const KsResult sym = ks_two_sample(std::move(diffs), std::move(negated));
  r.details["symmetry_ks_statistic"] = sym.statistic;
  r.details["symmetry_pass"] = sym.statistic * std::sqrt(n / 2.0) < ks_coefficient;
  return r;
}

IdentityReport check_laplace(const Alpha& alpha, const std::vector<double>& lambdas, double threshold,
                             const SeriesConfig& cfg) {
  IdentityReport r;
  r.name = "laplace alpha=" + alpha.to_string();
  r.threshold = threshold;
  bool reliable = true;
  nlohmann::json rows = nlohmann::json::array();
  for (double lambda : lambdas) {
    const LaplaceCheck c = laplace_check(alpha, lambda, cfg);
    r.discrepancy = std::max(r.discrepancy, c.discrepancy);
    reliable = reliable && c.reliable;
    rows.push_back({{"lambda", lambda},
                    {"discrepancy", c.discrepancy},
                    {"integral", c.integral},
                    {"expected", c.expected},
                    {"lower_cutoff", c.lower_cutoff},
                    {"lower_mass", c.lower_mass},
                    {"error_estimate", c.quadrature_error},
                    {"reliable", c.reliable}});
  }
  r.pass = reliable && r.discrepancy < r.threshold;
  r.details = {{"lambdas", rows}, {"reliable", reliable}};
  return r;
}

IdentityReport check_factorization_mc(int p, int n, std::size_t n_samples, std::uint64_t seed,
                                      double ks_coefficient) {
  const FactorList fl = lemma2_product(p, n);
  if (n_samples == 0) throw DomainError("check_factorization_mc: need at least one sample");
  const Alpha alpha = Alpha::rational(p, n);
  RandomSource rng_stable(derive_seed(seed, 0));
  RandomSource rng_product(derive_seed(seed, 1));
  std::vector<double> lhs(n_samples), rhs(n_samples);
  for (auto& v : lhs) v = -p * sample_log_stable(alpha, rng_stable);
  for (auto& v : rhs) v = sample_log_product(fl, rng_product);
  const KsResult ks = ks_two_sample(std::move(lhs), std::move(rhs));
  const double m = static_cast<double>(n_samples);
  IdentityReport r = ks_report("factorization p=" + std::to_string(p) + " n=" + std::to_string(n), ks,
                               std::sqrt(m * m / (2 * m)), ks_coefficient);
  r.details["represents"] = fl.represents;
  return r;
}

IdentityReport check_sampler_ks(const Alpha& alpha, std::size_t n_samples, std::uint64_t seed,
                                double ks_coefficient) {
  if (n_samples == 0) throw DomainError("check_sampler_ks: need at least one sample");
  RandomSource rng(seed);
  std::vector<double> logs(n_samples);
  for (auto& v : logs) v = sample_log_stable(alpha, rng);
  const TabulatedCdf cdf = stable_log_cdf(alpha);
  const KsResult ks = ks_one_sample(std::move(logs), std::cref(cdf));
  IdentityReport r = ks_report("sampler alpha=" + alpha.to_string(), ks, std::sqrt(static_cast<double>(n_samples)),
                               ks_coefficient);
  r.details["table_lower_cdf"] = cdf(cdf.lower());
  return r;
}

}  // namespace stable_msu
