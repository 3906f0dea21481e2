#include <mpfr.h>

#include <cmath>
#include <string>

#include "detail/mpfr_real.hpp"
#include "stable_msu/errors.hpp"
#include "stable_msu/msu.hpp"
#include "stable_msu/summation.hpp"

namespace stable_msu {
namespace {

constexpr mpfr_prec_t kCoefficientBits = 512;

void check_order(int order) {
  if (order < 1 || order > 60) throw DomainError("bb_expansion: order must lie in [1, 60]");
}

// Taylor coefficients of 1/Gamma(1+z) by exponentiating its log series
// l_1 = gamma, l_k = (-1)^{k+1} zeta(k) / k:  n e_n = sum_k k l_k e_{n-k}.
std::vector<double> inverse_gamma_taylor(int order) {
  using detail::MpfrReal;
  const auto prec = kCoefficientBits;
  std::vector<MpfrReal> kl;  // k * l_k, index k-1
  for (int k = 1; k <= order; ++k) {
    MpfrReal v(prec);
    if (k == 1) {
      mpfr_const_euler(v.get(), MPFR_RNDN);
    } else {
      mpfr_zeta_ui(v.get(), static_cast<unsigned long>(k), MPFR_RNDN);
      if (k % 2 == 0) v = -v;
    }
    kl.push_back(v);
  }
  std::vector<MpfrReal> e;
  e.emplace_back(1.0, prec);
  for (int n = 1; n <= order; ++n) {
    MpfrReal acc(0.0, prec);
    for (int k = 1; k <= n; ++k) acc += kl[k - 1] * e[n - k];
    mpfr_div_si(acc.get(), acc.get(), n, MPFR_RNDN);
    e.push_back(acc);
  }
  std::vector<double> out;
  out.reserve(e.size());
  for (const auto& v : e) out.push_back(v.to_double());
  return out;
}

struct PolyValue {
  double value = 0.0;
  double abs_value = 0.0;  // same polynomial with |coefficients| at |y|
};

// p(-y) by Horner.
PolyValue eval_at_minus(const std::vector<double>& c, double y) {
  PolyValue r;
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    r.value = std::fma(r.value, -y, *it);
    r.abs_value = r.abs_value * y + std::abs(*it);
  }
  return r;
}

// d/dy p(-y) = -p'(-y).
PolyValue derivative_at_minus(const std::vector<double>& c, double y) {
  PolyValue r;
  for (std::size_t k = c.size(); k-- > 1;) {
    const double d = static_cast<double>(k) * c[k];
    r.value = std::fma(r.value, -y, d);
    r.abs_value = r.abs_value * y + std::abs(d);
  }
  r.value = -r.value;
  return r;
}

template <class PolyEval>
EvalResult sum_p(const Alpha& alpha, double y, const BbExpansion& e, PolyEval&& poly) {
  const double a = alpha.value();
  CompensatedSum<double> sum;
  double rounding = 0.0, last = 0.0, before_last = 0.0;
  double a_pow = a;  // alpha^{j+1}
  for (std::size_t j = 0; j < e.b_coeffs.size(); ++j) {
    const PolyValue p = poly(e.r_polys[j], y);
    const double w = e.b_coeffs[j] * a_pow * ((j % 2 == 0) ? 1.0 : -1.0);
    const double term = w * p.value;
    sum.add(term);
    rounding += std::abs(w) * p.abs_value * (2.0 * static_cast<double>(e.r_polys[j].size()) + 4.0) * kUnitRoundoff;
    before_last = last;
    last = std::abs(term);
    a_pow *= a;
  }
  EvalResult r;
  r.value = sum.value();
  r.abs_error_estimate = last + before_last + rounding;
  r.terms_used = static_cast<int>(e.b_coeffs.size());
  r.reliable = true;
  return r;
}

}  // namespace

std::vector<std::vector<BigInt>> r_polys_exact(int order) {
  check_order(order);
  std::vector<std::vector<BigInt>> r{{BigInt(1)}};
  std::vector<BigInt> binom{BigInt(1)};  // row j of Pascal's triangle
  for (int j = 0; j < order; ++j) {
    // R_{j+1} = R_j + x sum_{m=0}^{j} C(j,m) R_{j-m}
    std::vector<BigInt> next(static_cast<std::size_t>(j + 2), BigInt(0));
    for (std::size_t k = 0; k < r[j].size(); ++k) next[k] += r[j][k];
    for (int m = 0; m <= j; ++m) {
      const auto& src = r[static_cast<std::size_t>(j - m)];
      for (std::size_t k = 0; k < src.size(); ++k) next[k + 1] += binom[static_cast<std::size_t>(m)] * src[k];
    }
    r.push_back(std::move(next));
    std::vector<BigInt> row(binom.size() + 1, BigInt(1));
    for (std::size_t m = 1; m < binom.size(); ++m) row[m] = binom[m - 1] + binom[m];
    binom = std::move(row);
  }
  return r;
}

BbExpansion bb_expansion(int order) {
  check_order(order);
  BbExpansion e;
  e.order = order;
  e.b_coeffs = inverse_gamma_taylor(order);
  for (const auto& poly : r_polys_exact(order)) {
    std::vector<double> c;
    c.reserve(poly.size());
    for (const auto& v : poly) c.push_back(v.convert_to<double>());
    e.r_polys.push_back(std::move(c));
  }
  return e;
}

EvalResult bb_p(const Alpha& alpha, double y, const BbExpansion& e) {
  return sum_p(alpha, y, e, eval_at_minus);
}

EvalResult bb_p_derivative(const Alpha& alpha, double y, const BbExpansion& e) {
  return sum_p(alpha, y, e, derivative_at_minus);
}

EvalResult bb_log_density(const Alpha& alpha, double t, const BbExpansion& e, double rel_tol) {
  if (!std::isfinite(t)) throw DomainError("bb_log_density: t must be finite");
  const double y = std::exp(-alpha.value() * t);
  const EvalResult p = bb_p(alpha, y, e);
  const double pre = y * std::exp(-y);
  EvalResult r;
  r.value = pre * p.value;
  r.abs_error_estimate = pre * p.abs_error_estimate + 4 * kUnitRoundoff * std::abs(r.value);
  r.terms_used = p.terms_used;
  r.reliable = std::isfinite(r.value) && r.abs_error_estimate <= rel_tol * std::abs(r.value);
  return r;
}

}  // namespace stable_msu
