#include "stable_msu/msu.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "detail/parallel.hpp"
#include "stable_msu/errors.hpp"
#include "stable_msu/kanter.hpp"
#include "stable_msu/quadrature.hpp"
#include "stable_msu/specfun.hpp"
#include "stable_msu/summation.hpp"

namespace stable_msu {

EvalResult lce_residual(const JetSums& s) {
  EvalResult r;
  r.value = difference_of_products(s.s2, s.s0, s.s1, s.s1);
  r.abs_error_estimate = s.e2 * std::abs(s.s0) + std::abs(s.s2) * s.e0 + 2 * std::abs(s.s1) * s.e1 +
                         2 * kUnitRoundoff * (std::abs(s.s2 * s.s0) + s.s1 * s.s1);
  r.terms_used = s.terms_used;
  r.reliable = s.reliable;
  return r;
}

EvalResult lce_residual(const Alpha& alpha, double x, const SeriesConfig& cfg) {
  return lce_residual(StableSeries(alpha, cfg).sums(x));
}

TailSign tail_residual_sign(const Alpha& alpha) {
  if (alpha.equals(1, 2)) throw PoleError("tail_residual_sign: Gamma(-2 alpha) has a pole at alpha = 1/2");
  const double a = alpha.value();
  const LogGammaEval g1 = log_gamma(-a);
  const LogGammaEval g2 = log_gamma(-2 * a);
  TailSign t;
  t.coefficient = g1.sign * g2.sign * 0.5 * a * a * std::exp(-g1.value - g2.value);
  t.msu_compatible = t.coefficient > 0;
  return t;
}

std::string_view to_string(MsuClass c) {
  return c == MsuClass::violation_found ? "violation_found" : "no_violation_found";
}

MsuReport msu_scan(const Alpha& alpha, double x_lo, double x_hi, int points, const SeriesConfig& cfg,
                   int threads) {
  if (!(x_lo > 0.0) || !(x_hi > x_lo) || !std::isfinite(x_hi)) {
    throw DomainError("msu_scan: need 0 < x_lo < x_hi");
  }
  if (points < 16) throw DomainError("msu_scan: need at least 16 grid points");
  const StableSeries series(alpha, cfg);
  const auto n = static_cast<std::size_t>(points);

  MsuReport rep;
  rep.alpha = alpha;
  rep.grid.resize(n);
  const double log_ratio = std::log(x_hi / x_lo);
  for (std::size_t i = 0; i < n; ++i) {
    rep.grid[i] = x_lo * std::exp(log_ratio * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  rep.grid.back() = x_hi;

  std::vector<JetSums> sums(n);
  detail::parallel_for(n, threads, [&](std::size_t i) { sums[i] = series.sums(rep.grid[i]); });

  rep.residuals.resize(n);
  rep.normalized_residuals.assign(n, std::numeric_limits<double>::quiet_NaN());
  std::size_t unreliable = 0;
  for (std::size_t i = 0; i < n; ++i) {
    rep.residuals[i] = lce_residual(sums[i]);
    if (!sums[i].reliable) {
      ++unreliable;
    } else if (sums[i].s0 > 0.0) {
      rep.normalized_residuals[i] = rep.residuals[i].value / (sums[i].s0 * sums[i].s0);
    }
  }
  rep.unreliable_fraction = static_cast<double>(unreliable) / static_cast<double>(n);
  if (2 * unreliable > n) {
    throw DomainError("msu_scan: " + std::to_string(unreliable) + " of " + std::to_string(n) +
                      " grid points are outside the reliable domain");
  }

  std::size_t witness = n;
  for (std::size_t i = 0; i < n; ++i) {
    const EvalResult& g = rep.residuals[i];
    if (!g.reliable || !(g.value > g.abs_error_estimate) || std::isnan(rep.normalized_residuals[i])) continue;
    if (witness == n || rep.normalized_residuals[i] > rep.normalized_residuals[witness]) witness = i;
  }
  if (witness < n) rep.witness = rep.grid[witness];
  rep.classification = rep.witness ? MsuClass::violation_found : MsuClass::no_violation_found;

  // Mode: grid argmax of f among reliable points, refined by golden section.
  std::size_t first = n, last = 0, best = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (!sums[i].reliable) continue;
    first = std::min(first, i);
    last = i;
    if (best == n || sums[i].s0 > sums[best].s0) best = i;
  }
  if (best == first || best == last) {
    rep.mode_at_boundary = true;
    rep.mode_estimate = rep.grid[best];
  } else {
    auto f = [&](double x) { return series.density(x).value; };
    rep.mode_estimate = quad::golden_section_max(f, rep.grid[best - 1], rep.grid[best + 1], 1e-10 * rep.grid[best]);
  }

  // Inflection: first change of f'' from negative to nonnegative past the mode.
  auto fpp = [&](const JetSums& s, double x) { return (s.s2 - s.s1) / (x * x); };
  if (!(rep.mode_at_boundary && best == last)) {
    for (std::size_t i = best + 1; i < n; ++i) {
      if (!sums[i - 1].reliable || !sums[i].reliable) continue;
      if (fpp(sums[i - 1], rep.grid[i - 1]) < 0.0 && fpp(sums[i], rep.grid[i]) >= 0.0) {
        auto h = [&](double x) { return fpp(series.sums(x), x); };
        rep.inflection_estimate = quad::bisect_root(h, rep.grid[i - 1], rep.grid[i], 1e-12 * rep.grid[i]);
        break;
      }
    }
  }
  if (rep.inflection_estimate) {
    rep.residual_nonpositive_to_inflection = true;
    for (std::size_t i = 0; i < n && rep.grid[i] <= *rep.inflection_estimate; ++i) {
      const EvalResult& g = rep.residuals[i];
      if (g.reliable && g.value > g.abs_error_estimate) rep.residual_nonpositive_to_inflection = false;
    }
  }
  return rep;
}

EvalResult integral_criterion(const Alpha& alpha, double x, const SeriesConfig& cfg) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("integral_criterion: x must be positive and finite");
  const double a = alpha.value();
  const StableSeries series(alpha, cfg);
  const double w_min = reliable_lower_bound(alpha, cfg);

  bool reliable = true;
  struct Pair {
    double f, fp, f_err, fp_err;
  };
  auto eval = [&](double w) -> Pair {
    if (w >= w_min) {
      const DensityJet j = series.jet(w);
      if (!j.f.reliable) reliable = false;
      return {j.f.value, j.fp.value, j.f.abs_error_estimate, j.fp.abs_error_estimate};
    }
    const KanterJet k = kanter_density_jet(alpha, w);
    if (!k.f.reliable || !k.fp.reliable) reliable = false;
    return {k.f.value, k.fp.value, k.f.abs_error_estimate, k.fp.abs_error_estimate};
  };

  const Pair px = eval(x);
  double worst = 0.0;
  auto integrand = [&](double u) {
    const double y = std::pow(u, 1.0 / (1.0 - a));
    const double w = x - y;
    if (!(w > 0.0)) return 0.0;
    const Pair pw = eval(w);
    worst = std::max(worst, std::abs(pw.fp_err * px.f) + std::abs(pw.fp * px.f_err) + std::abs(pw.f_err * px.fp) +
                                std::abs(pw.f * px.fp_err));
    return (pw.fp * px.f - pw.f * px.fp) / (1.0 - a);
  };

  const double u_end = std::pow(x, 1.0 - a);
  quad::Options opts;
  opts.rel_tol = 1e-10;
  opts.max_levels = 10;
  // Split where the inner evaluator changes so each piece is smooth.
  double total = 0.0, err = 0.0;
  bool converged = true;
  auto piece = [&](double lo, double hi) {
    const quad::Result r = quad::tanh_sinh(integrand, lo, hi, opts);
    total += r.value;
    err += r.abs_error_estimate;
    converged = converged && r.converged;
  };
  if (x > w_min) {
    const double u_cut = std::pow(x - w_min, 1.0 - a);
    piece(0.0, u_cut);
    piece(u_cut, u_end);
  } else {
    piece(0.0, u_end);
  }
  EvalResult out;
  out.value = total;
  out.abs_error_estimate = err + worst * u_end / (1.0 - a);
  out.reliable = reliable && converged;
  return out;
}

double ualpha_density(const Alpha& alpha, double x) {
  const double a = alpha.value();
  const double q = std::exp(-a * std::abs(x));
  return sin_pi(a) * q / (std::numbers::pi * (1.0 + 2.0 * cos_pi(a) * q + q * q));
}

double ualpha_logconcavity_margin(const Alpha& alpha, double x) {
  const double c = cos_pi(alpha.value());
  if (c == 0.0) return 1.0;
  return 1.0 + c * std::cosh(alpha.value() * x);
}

double ualpha_log_second_derivative(const Alpha& alpha, double x) {
  const double a = alpha.value();
  const double c = cos_pi(a);
  const double q = std::exp(-a * std::abs(x));
  // (1 + c cosh) / h^2 rewritten in q = e^{-a|x|} to stay finite for large |x|.
  const double den = 1.0 + 2.0 * c * q + q * q;
  return -4.0 * a * a * (q * q + 0.5 * c * (q + q * q * q)) / (den * den);
}

double ualpha_cdf(const Alpha& alpha, double x) {
  const double a = alpha.value();
  return 0.5 + std::atan(std::tan(0.5 * std::numbers::pi * a) * std::tanh(0.5 * a * x)) / (std::numbers::pi * a);
}

}  // namespace stable_msu
