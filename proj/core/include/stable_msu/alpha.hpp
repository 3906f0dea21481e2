#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace stable_msu {

/// Exact ratio p/n in lowest terms.
struct Rational {
  long long num = 0;
  long long den = 1;

  [[nodiscard]] double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// Stability index of a positive stable law, 0 < alpha < 1.
///
/// When built from an integer pair the exact ratio is kept alongside the
/// rounded double; series kernels use it to make sin(pi*alpha*n) vanish
/// exactly whenever alpha*n is an integer.
class Alpha {
 public:
  /// Throws DomainError unless 0 < value < 1.
  explicit Alpha(double value);

  /// Builds p/n reduced to lowest terms. Throws DomainError unless 0 < p/n < 1.
  static Alpha rational(long long p, long long n);

  /// Parses "0.35" or "2/5".
  static Alpha parse(std::string_view text);

  [[nodiscard]] double value() const { return value_; }
  [[nodiscard]] const std::optional<Rational>& rational_form() const { return rational_; }

  /// True when this alpha is p/n exactly (rational form) or rounds to it.
  [[nodiscard]] bool equals(long long p, long long n) const;

  [[nodiscard]] std::string to_string() const;

 private:
  Alpha() = default;
  double value_ = 0.5;
  std::optional<Rational> rational_;
};

}  // namespace stable_msu
