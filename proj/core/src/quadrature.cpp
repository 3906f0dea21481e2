#include "stable_msu/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <utility>

namespace stable_msu::quad {
namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

// Level 0 uses unit step; level l halves it and only visits the new odd nodes.
template <class Visit>
Result refine(Visit&& visit_level, const Options& opts) {
  Result r;
  double sum = visit_level(0, r.evaluations);
  double h = 1.0;
  double prev = h * sum;
  r.value = prev;
  r.abs_error_estimate = std::abs(prev);
  for (int level = 1; level <= opts.max_levels; ++level) {
    h *= 0.5;
    sum += visit_level(level, r.evaluations);
    const double cur = h * sum;
    r.levels = level;
    r.value = cur;
    r.abs_error_estimate = std::abs(cur - prev);
    prev = cur;
    if (!std::isfinite(cur)) {
      r.converged = false;
      return r;
    }
    const double tol = std::max(opts.abs_tol, opts.rel_tol * std::abs(cur));
    if (level >= 3 && r.abs_error_estimate <= tol) {
      r.converged = true;
      return r;
    }
  }
  return r;
}

}  // namespace

Result tanh_sinh(const Integrand& f, double a, double b, const Options& opts) {
  if (a == b) return Result{0.0, 0.0, 0, 0, true};
  if (a > b) {
    Result r = tanh_sinh(f, b, a, opts);
    r.value = -r.value;
    return r;
  }
  constexpr double kTMax = 4.0;
  const double width = b - a;
  const double mid = a + width / 2;

  auto node_pair = [&](double t, int& evals) {
    const double u = kHalfPi * std::sinh(t);
    const double e = std::exp(-2 * u);
    const double dist = width * e / (1 + e);
    const double w = kHalfPi * std::cosh(t) * 4 * e / ((1 + e) * (1 + e));
    double s = 0.0;
    const double left = a + dist;
    const double right = b - dist;
    if (left > a && left < b) {
      s += f(left);
      ++evals;
    }
    if (right < b && right > a) {
      s += f(right);
      ++evals;
    }
    return w * s * (width / 2);
  };

  auto visit = [&](int level, int& evals) {
    double s = 0.0;
    if (level == 0) {
      s += kHalfPi * f(mid) * (width / 2);
      ++evals;
      for (int k = 1; k <= static_cast<int>(kTMax); ++k) s += node_pair(k, evals);
      return s;
    }
    const double step = std::ldexp(1.0, -level);
    for (double t = step; t <= kTMax; t += 2 * step) s += node_pair(t, evals);
    return s;
  };
  return refine(visit, opts);
}

Result exp_sinh(const Integrand& f, double a, const Options& opts) {
  constexpr double kTLeft = 6.0;
  constexpr double kTRight = 6.5;

  auto node = [&](double t, int& evals) {
    const double v = std::exp(kHalfPi * std::sinh(t));
    const double x = a + v;
    if (!(x > a) || !std::isfinite(x)) return 0.0;
    ++evals;
    const double fx = f(x);
    if (fx == 0.0) return 0.0;
    return fx * kHalfPi * std::cosh(t) * v;
  };

  auto visit = [&](int level, int& evals) {
    double s = 0.0;
    if (level == 0) {
      for (int k = -static_cast<int>(kTLeft); k <= static_cast<int>(kTRight); ++k) s += node(k, evals);
      return s;
    }
    const double step = std::ldexp(1.0, -level);
    for (double t = step; t <= kTRight; t += 2 * step) s += node(t, evals);
    for (double t = -step; t >= -kTLeft; t -= 2 * step) s += node(t, evals);
    return s;
  };
  return refine(visit, opts);
}

double gauss_legendre(const Integrand& f, double a, double b) {
  static constexpr std::array<double, 5> kNodes = {
      0.1488743389816312108848260, 0.4333953941292471907992659, 0.6794095682990244062343274,
      0.8650633666889845107320967, 0.9739065285171717200779640};
  static constexpr std::array<double, 5> kWeights = {
      0.2955242247147528701738930, 0.2692667193099963550912269, 0.2190863625159820439955349,
      0.1494513491505805931457763, 0.0666713443086881375935688};
  const double c = (a + b) / 2;
  const double h = (b - a) / 2;
  double s = 0.0;
  for (std::size_t i = 0; i < kNodes.size(); ++i) {
    s += kWeights[i] * (f(c - h * kNodes[i]) + f(c + h * kNodes[i]));
  }
  return s * h;
}

double golden_section_max(const std::function<double(double)>& f, double a, double b,
                          double x_tol) {
  const double inv_phi = (std::sqrt(5.0) - 1) / 2;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (std::abs(b - a) > x_tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return (a + b) / 2;
}

double bisect_root(const std::function<double(double)>& f, double a, double b, double x_tol) {
  double fa = f(a);
  for (int it = 0; it < 200 && std::abs(b - a) > x_tol; ++it) {
    const double m = a + (b - a) / 2;
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm < 0) == (fa < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return a + (b - a) / 2;
}

}  // namespace stable_msu::quad
