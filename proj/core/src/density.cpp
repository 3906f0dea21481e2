#include "stable_msu/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <type_traits>
#include <utility>

#include "detail/mpfr_real.hpp"
#include "stable_msu/errors.hpp"
#include "stable_msu/kanter.hpp"
#include "stable_msu/quadrature.hpp"
#include "stable_msu/specfun.hpp"
#include "stable_msu/summation.hpp"

namespace stable_msu {
namespace {

using detail::MpfrReal;

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLogPi = std::log(std::numbers::pi);

// Which series a kernel sums. The density series has powers x^{-(1+alpha n)}
// and optional derivative sums; the survival series x^{-alpha n}.
enum class Series { density, survival };

double to_double(double v) { return v; }
double to_double(const MpfrReal& v) { return v.to_double(); }
bool is_zero(double v) { return v == 0.0; }
bool is_zero(const MpfrReal& v) { return mpfr_zero_p(v.get()) != 0; }

struct MpfrSum {
  explicit MpfrSum(mpfr_prec_t prec) : v(0.0, prec) {}
  void add(const MpfrReal& t) { v += t; }
  [[nodiscard]] const MpfrReal& value() const { return v; }
  MpfrReal v;
};

// (-1)^(n-1) sin(pi alpha n) in double. Rational alpha reduces p n mod 2q
// exactly so the zeros at integer alpha n are exact.
double signed_sine(const Alpha& alpha, long long n) {
  double s = 0.0;
  if (const auto& r = alpha.rational_form()) {
    const long long rem = (r->num * n) % (2 * r->den);
    s = (rem % r->den == 0) ? 0.0 : sin_pi(static_cast<double>(rem) / static_cast<double>(r->den));
  } else {
    const double a = alpha.value();
    const double nd = static_cast<double>(n);
    const double hi = a * nd;
    const double lo = std::fma(a, nd, -hi);
    s = sin_pi(std::fmod(hi, 2.0) + lo);
  }
  return (n % 2 == 1) ? s : -s;
}

MpfrReal signed_sine_mp(const Alpha& alpha, long long n, mpfr_prec_t prec) {
  MpfrReal s(prec);
  if (const auto& r = alpha.rational_form()) {
    const long long rem = (r->num * n) % (2 * r->den);
    if (rem % r->den != 0) {
      MpfrReal v = MpfrReal::pi(prec);
      mpfr_mul_si(v.get(), v.get(), static_cast<long>(rem), MPFR_RNDN);
      mpfr_div_si(v.get(), v.get(), static_cast<long>(r->den), MPFR_RNDN);
      s = sin(v);
    }
  } else {
    // alpha * n is exact at this width; reduce it mod 2 before scaling by pi.
    MpfrReal v(alpha.value(), prec + 64);
    mpfr_mul_si(v.get(), v.get(), static_cast<long>(n), MPFR_RNDN);
    MpfrReal half(prec + 64);
    mpfr_div_2ui(half.get(), v.get(), 1, MPFR_RNDN);
    mpfr_floor(half.get(), half.get());
    mpfr_mul_2ui(half.get(), half.get(), 1, MPFR_RNDN);
    mpfr_sub(v.get(), v.get(), half.get(), MPFR_RNDN);
    MpfrReal arg = MpfrReal::pi(prec) * v;
    mpfr_prec_round(arg.get(), prec, MPFR_RNDN);
    s = sin(arg);
  }
  if (n % 2 == 0) s = -s;
  return s;
}

// log(Gamma(offset + alpha n) / (pi n!)) with offset 1 for the density
// and 0 for the survival series.
double log_coefficient(double alpha, long long n, Series kind) {
  const double nd = static_cast<double>(n);
  const double g = kind == Series::density ? log_gamma(1.0 + alpha * nd).value
                                           : log_gamma(alpha * nd).value;
  return g - log_gamma(nd + 1.0).value - kLogPi;
}

MpfrReal log_coefficient_mp(const MpfrReal& alpha, long long n, Series kind, mpfr_prec_t prec) {
  MpfrReal an = alpha;
  mpfr_mul_si(an.get(), an.get(), static_cast<long>(n), MPFR_RNDN);
  if (kind == Series::density) mpfr_add_ui(an.get(), an.get(), 1, MPFR_RNDN);
  MpfrReal nf(prec);
  mpfr_set_si(nf.get(), static_cast<long>(n + 1), MPFR_RNDN);
  return lngamma(an) - lngamma(nf) - log(MpfrReal::pi(prec));
}

struct KernelInput {
  double alpha = 0.5;
  double x = 1.0;
  Series kind = Series::density;
  bool derivatives = false;
  const SeriesConfig* cfg = nullptr;
  double unit = kUnitRoundoff;  // working-precision unit roundoff
  double guard = 1e8;
};

// Sums the series termwise. `coef(n)` yields {log coefficient, signed sine}
// in the working type R. Rounding error per term is modelled as
// unit * (8 + 4 (|log coef| + |power * log x|)) times |term|; truncation as
// the geometric tail of the envelope, whose log is concave in n so the
// ratio of successive envelopes only decreases past the peak.
template <class R, class Acc, class Coef, class MakeReal>
JetSums run_kernel(const KernelInput& in, Coef&& coef, MakeReal&& make) {
  const SeriesConfig& cfg = *in.cfg;
  const double offset = in.kind == Series::density ? 1.0 : 0.0;
  const double log_x_d = std::log(in.x);
  const R alpha = make(in.alpha);
  const R log_x = make(log_x_d);

  Acc s0 = [&] {
    if constexpr (std::is_same_v<Acc, CompensatedSum<double>>) return Acc{};
    else return Acc(make(0.0).precision());
  }();
  Acc s1 = s0, s2 = s0;

  double round0 = 0, round1 = 0, round2 = 0, max_abs = 0;
  double prev_env = kInf, ratio = 1.0, last_env = 0.0, last_a = 1.0;
  bool peaked = false, converged = false;
  int quiet = 0, n = 1;
  for (; n <= cfg.max_terms; ++n) {
    auto [lc, sine] = coef(n);
    const double a_d = offset + in.alpha * n;
    const double lc_d = to_double(lc);
    const double loge_d = lc_d - a_d * log_x_d;
    const double env_d = std::exp(loge_d);

    if (!is_zero(sine)) {
      const R a = alpha * make(static_cast<double>(n)) + make(offset);
      const R t = sine * exp(lc - a * log_x);
      s0.add(t);
      const double td = std::abs(to_double(t));
      const double w = in.unit * (8.0 + 4.0 * (std::abs(lc_d) + std::abs(a_d * log_x_d)));
      round0 += td * w;
      if (in.derivatives) {
        const R at = a * t;
        s1.add(-at);
        s2.add(a * at);
        round1 += td * a_d * w;
        round2 += td * a_d * a_d * w;
      }
      max_abs = std::max(max_abs, td);
    }

    if (env_d < prev_env) peaked = true;
    if (prev_env > 0 && std::isfinite(prev_env)) ratio = env_d / prev_env;
    prev_env = env_d;
    const double scale = in.derivatives ? a_d * a_d : 1.0;
    const double target = cfg.rel_tol * std::abs(to_double(s0.value()));
    if (peaked && env_d * scale <= target) {
      if (++quiet >= 3) {
        converged = true;
        last_env = env_d;
        last_a = a_d;
        break;
      }
    } else {
      quiet = 0;
    }
  }

  JetSums out;
  out.terms_used = std::min(n, cfg.max_terms);
  out.s0 = to_double(s0.value());
  out.s1 = to_double(s1.value());
  out.s2 = to_double(s2.value());
  double trunc = 0.0;
  if (converged) {
    const double rho = std::min(ratio, 0.99);
    trunc = 2.0 * last_env * rho / (1.0 - rho);
  } else {
    trunc = std::isfinite(prev_env) ? prev_env * cfg.max_terms : kInf;
    last_a = offset + in.alpha * cfg.max_terms;
  }
  out.e0 = round0 + trunc + 2 * kUnitRoundoff * std::abs(out.s0);
  out.e1 = round1 + trunc * last_a + 2 * kUnitRoundoff * std::abs(out.s1);
  out.e2 = round2 + trunc * last_a * last_a + 2 * kUnitRoundoff * std::abs(out.s2);
  out.cancellation_ratio = out.s0 != 0.0 ? max_abs / std::abs(out.s0) : (max_abs > 0 ? kInf : 0.0);
  out.reliable = converged && out.cancellation_ratio <= in.guard && std::isfinite(out.e0);
  return out;
}

double effective_guard(const SeriesConfig& cfg) {
  return std::ldexp(cfg.cancellation_guard, cfg.precision_bits - 53);
}

JetSums sum_mpfr(const Alpha& alpha, double x, Series kind, bool derivs, const SeriesConfig& cfg) {
  const auto prec = static_cast<mpfr_prec_t>(cfg.precision_bits);
  const MpfrReal alpha_mp(alpha.value(), prec);
  KernelInput in{alpha.value(), x, kind, derivs, &cfg, std::ldexp(1.0, -cfg.precision_bits),
                 effective_guard(cfg)};
  auto make = [prec](double v) { return MpfrReal(v, prec); };
  auto coef = [&](int n) {
    return std::pair<MpfrReal, MpfrReal>(log_coefficient_mp(alpha_mp, n, kind, prec),
                                         signed_sine_mp(alpha, n, prec));
  };
  return run_kernel<MpfrReal, MpfrSum>(in, coef, make);
}

template <class Coef>
JetSums sum_double(const Alpha& alpha, double x, Series kind, bool derivs, const SeriesConfig& cfg,
                   Coef&& coef) {
  KernelInput in{alpha.value(), x, kind, derivs, &cfg, kUnitRoundoff, effective_guard(cfg)};
  auto make = [](double v) { return v; };
  return run_kernel<double, CompensatedSum<double>>(in, coef, make);
}

JetSums sum_on_the_fly(const Alpha& alpha, double x, Series kind, bool derivs,
                       const SeriesConfig& cfg) {
  if (cfg.precision_bits > 53) return sum_mpfr(alpha, x, kind, derivs, cfg);
  auto coef = [&](int n) {
    return std::pair<double, double>(log_coefficient(alpha.value(), n, kind),
                                     signed_sine(alpha, n));
  };
  return sum_double(alpha, x, kind, derivs, cfg, coef);
}

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError(std::string(what) + ": x must be positive and finite");
  }
}

EvalResult to_eval(double value, double err, const JetSums& s) {
  return EvalResult{value, err, s.terms_used, s.reliable};
}

EvalResult density_from(const JetSums& s) { return to_eval(s.s0, s.e0, s); }

DensityJet jet_from(const JetSums& s, double x) {
  DensityJet j;
  j.x = x;
  j.f = to_eval(s.s0, s.e0, s);
  j.fp = to_eval(s.s1 / x, s.e1 / x + kUnitRoundoff * std::abs(s.s1 / x), s);
  const double fpp = (s.s2 - s.s1) / (x * x);
  j.fpp = to_eval(fpp, (s.e2 + s.e1) / (x * x) + 2 * kUnitRoundoff * std::abs(fpp), s);
  return j;
}

// x^{-1} e^{-z/2} W_{1/2,1/6}(z), z = 4/(27 x^2), before normalisation.
SpecEval two_thirds_raw(double x) {
  const double z = 4.0 / (27.0 * x * x);
  const SpecEval w = whittaker_w_stable(z, 1e-13);
  const double pre = std::exp(-z / 2) / x;
  return {pre * w.value, pre * w.abs_error_estimate, Method::quadrature};
}

}  // namespace

void SeriesConfig::validate() const {
  if (max_terms < 1) throw DomainError("SeriesConfig: max_terms must be >= 1");
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw DomainError("SeriesConfig: rel_tol must lie in (0, 1)");
  if (!(cancellation_guard >= 1.0)) throw DomainError("SeriesConfig: cancellation_guard must be >= 1");
  if (precision_bits < 53 || precision_bits > 4096) {
    throw DomainError("SeriesConfig: precision_bits must lie in [53, 4096]");
  }
}

StableSeries::StableSeries(const Alpha& alpha, const SeriesConfig& cfg) : alpha_(alpha), cfg_(cfg) {
  cfg_.validate();
  if (cfg_.precision_bits > 53) return;
  log_coef_.resize(static_cast<std::size_t>(cfg_.max_terms));
  sine_.resize(static_cast<std::size_t>(cfg_.max_terms));
  for (int n = 1; n <= cfg_.max_terms; ++n) {
    log_coef_[n - 1] = log_coefficient(alpha_.value(), n, Series::density);
    sine_[n - 1] = signed_sine(alpha_, n);
  }
}

JetSums StableSeries::sums(double x) const {
  require_positive(x, "StableSeries");
  if (cfg_.precision_bits > 53) return sum_mpfr(alpha_, x, Series::density, true, cfg_);
  auto coef = [this](int n) { return std::pair<double, double>(log_coef_[n - 1], sine_[n - 1]); };
  return sum_double(alpha_, x, Series::density, true, cfg_, coef);
}

EvalResult StableSeries::density(double x) const {
  require_positive(x, "StableSeries::density");
  if (cfg_.precision_bits > 53) return density_from(sum_mpfr(alpha_, x, Series::density, false, cfg_));
  auto coef = [this](int n) { return std::pair<double, double>(log_coef_[n - 1], sine_[n - 1]); };
  return density_from(sum_double(alpha_, x, Series::density, false, cfg_, coef));
}

DensityJet StableSeries::jet(double x) const { return jet_from(sums(x), x); }

EvalResult StableSeries::survival(double x) const {
  require_positive(x, "StableSeries::survival");
  return density_from(sum_on_the_fly(alpha_, x, Series::survival, false, cfg_));
}

EvalResult density_series(const Alpha& alpha, double x, const SeriesConfig& cfg) {
  cfg.validate();
  require_positive(x, "density_series");
  return density_from(sum_on_the_fly(alpha, x, Series::density, false, cfg));
}

DensityJet density_jet(const Alpha& alpha, double x, const SeriesConfig& cfg) {
  cfg.validate();
  require_positive(x, "density_jet");
  return jet_from(sum_on_the_fly(alpha, x, Series::density, true, cfg), x);
}

double two_thirds_normalization() {
  static const double c = [] {
    const EvalResult series = density_series(Alpha::rational(2, 3), 2.0);
    return series.value / two_thirds_raw(2.0).value;
  }();
  return c;
}

EvalResult density_closed(const Alpha& alpha, double x) {
  require_positive(x, "density_closed");
  EvalResult out;
  out.reliable = true;
  if (alpha.equals(1, 2)) {
    out.value = std::exp(-0.25 / x) / (2.0 * std::sqrt(std::numbers::pi) * x * std::sqrt(x));
    out.abs_error_estimate = 8 * kUnitRoundoff * (1.0 + 0.25 / x) * out.value;
  } else if (alpha.equals(1, 3)) {
    const double arg = 2.0 / (3.0 * std::sqrt(3.0) * std::sqrt(x));
    const SpecEval k = bessel_k(1.0 / 3.0, arg, 1e-13);
    const double pre = 1.0 / (3.0 * std::numbers::pi * x * std::sqrt(x));
    out.value = pre * k.value;
    out.abs_error_estimate = pre * k.abs_error_estimate + 8 * kUnitRoundoff * out.value;
  } else if (alpha.equals(2, 3)) {
    const SpecEval raw = two_thirds_raw(x);
    const double c = two_thirds_normalization();
    out.value = c * raw.value;
    out.abs_error_estimate = c * raw.abs_error_estimate + 8 * kUnitRoundoff * out.value;
  } else {
    throw DomainError("density_closed: no closed form for alpha = " + alpha.to_string());
  }
  return out;
}

double tail_coefficient(const Alpha& alpha) {
  return alpha.value() * std::exp(-log_gamma(1.0 - alpha.value()).value);
}

double reliable_lower_bound(const Alpha& alpha, const SeriesConfig& cfg) {
  const StableSeries series(alpha, cfg);
  auto ok = [&](double x) { return series.density(x).reliable; };
  double lo = 1.0, hi = 1.0;
  if (ok(1.0)) {
    lo = 0.1;
    while (ok(lo)) {
      hi = lo;
      lo /= 10.0;
      if (lo < 1e-300) return hi;
    }
  } else {
    hi = 10.0;
    while (!ok(hi)) {
      lo = hi;
      hi *= 10.0;
      if (hi > 1e300) throw DomainError("reliable_lower_bound: series never reliable");
    }
  }
  // log-bisection between unreliable lo and reliable hi
  for (int i = 0; i < 60 && hi / lo > 1.0 + 1e-9; ++i) {
    const double mid = std::sqrt(lo * hi);
    (ok(mid) ? hi : lo) = mid;
  }
  // The cancellation ratio crosses the guard noisily; step clear of the crossing.
  double x = hi * 1.01;
  while (!ok(x)) x *= 1.01;
  return x;
}

LaplaceCheck laplace_check(const Alpha& alpha, double lambda, const SeriesConfig& cfg) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw DomainError("laplace_check: lambda must be finite and >= 0");
  }
  const StableSeries series(alpha, cfg);
  LaplaceCheck out;
  out.lower_cutoff = reliable_lower_bound(alpha, cfg);
  const double x_lo = out.lower_cutoff;
  const EvalResult lower = kanter_cdf(alpha, x_lo);
  out.lower_mass = lower.value;
  // int_0^x_lo e^{-lambda t} f(t) dt = e^{-lambda x_lo} F(x_lo) + lambda int_0^x_lo e^{-lambda t} F(t) dt
  double lower_part = std::exp(-lambda * x_lo) * lower.value;
  double lower_err = lower.abs_error_estimate;
  bool lower_ok = lower.reliable;
  if (lambda > 0.0 && lower.value > 0.0) {
    auto by_parts = [&](double t) {
      const EvalResult c = kanter_cdf(alpha, t);
      if (!c.reliable) lower_ok = false;
      return std::exp(-lambda * t) * c.value;
    };
    const quad::Result r = quad::tanh_sinh(by_parts, 0.0, x_lo, {1e-10, 0.0, 10});
    lower_part += lambda * r.value;
    lower_err += lambda * (r.abs_error_estimate + x_lo * lower.abs_error_estimate);
    lower_ok = lower_ok && r.converged;
  }

  const double upper = lambda == 0.0 ? std::max(1e6, 100.0 * x_lo) : std::max(10.0 * x_lo, 60.0 / lambda);
  bool all_reliable = lower_ok;
  double series_err = 0.0;
  auto integrand = [&](double u) {
    const double t = std::exp(u);
    const EvalResult f = series.density(t);
    if (!f.reliable) all_reliable = false;
    const double w = t * std::exp(-lambda * t);
    series_err = std::max(series_err, w * f.abs_error_estimate);
    return w * f.value;
  };
  quad::Options opts;
  opts.rel_tol = 1e-11;
  opts.max_levels = 12;
  const quad::Result body = quad::tanh_sinh(integrand, std::log(x_lo), std::log(upper), opts);

  const EvalResult tail = series.survival(upper);
  const double tail_weight = std::exp(-lambda * upper);
  out.integral = lower_part + body.value + tail_weight * tail.value;
  out.expected = std::exp(-std::pow(lambda, alpha.value()));
  out.discrepancy = std::abs(out.integral - out.expected);
  out.quadrature_error = lower_err + body.abs_error_estimate + series_err * (std::log(upper) - std::log(x_lo)) +
                         tail_weight * tail.abs_error_estimate;
  out.reliable = all_reliable && tail.reliable && body.converged;
  return out;
}

}  // namespace stable_msu
