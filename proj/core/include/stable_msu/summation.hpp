#pragma once

#include <cmath>
#include <limits>

namespace stable_msu {

inline constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon() / 2;

/// Neumaier's variant of Kahan summation. Also tracks the sum of absolute
/// values, which bounds the rounding error of the compensated result.
template <class Real = double>
class CompensatedSum {
 public:
  void add(const Real& term) {
    using std::abs;
    const Real t = sum_ + term;
    if (abs(sum_) >= abs(term)) {
      comp_ += (sum_ - t) + term;
    } else {
      comp_ += (term - t) + sum_;
    }
    sum_ = t;
    abs_sum_ += abs(term);
    const Real a = abs(term);
    if (a > max_abs_) max_abs_ = a;
  }

  [[nodiscard]] Real value() const { return sum_ + comp_; }
  [[nodiscard]] Real abs_sum() const { return abs_sum_; }
  [[nodiscard]] Real max_abs() const { return max_abs_; }

 private:
  Real sum_{0};
  Real comp_{0};
  Real abs_sum_{0};
  Real max_abs_{0};
};

/// a*b - c*d with one rounding (Kahan's fma trick).
inline double difference_of_products(double a, double b, double c, double d) {
  const double cd = c * d;
  const double err = std::fma(-c, d, cd);
  const double dop = std::fma(a, b, -cd);
  return dop + err;
}

/// sin(pi*v) with exact zeros at integers.
double sin_pi(double v);
/// cos(pi*v) with exact zeros at half-integers.
double cos_pi(double v);

}  // namespace stable_msu
