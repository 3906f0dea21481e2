#include "stable_msu/alpha.hpp"

#include <charconv>
#include <cmath>
#include <numeric>
#include <limits>

#include "stable_msu/errors.hpp"

namespace stable_msu {

Alpha::Alpha(double value) : value_(value) {
  if (!(value > 0.0 && value < 1.0)) {
    throw DomainError("alpha must lie in (0, 1), got " + std::to_string(value));
  }
}

Alpha Alpha::rational(long long p, long long n) {
  if (p <= 0 || n <= 0 || p >= n) {
    throw DomainError("alpha = p/n requires 0 < p < n, got " + std::to_string(p) + "/" +
                      std::to_string(n));
  }
  const long long g = std::gcd(p, n);
  Alpha a;
  a.rational_ = Rational{p / g, n / g};
  a.value_ = a.rational_->value();
  return a;
}

Alpha Alpha::parse(std::string_view text) {
  auto parse_int = [&](std::string_view s) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
      throw DomainError("cannot parse alpha '" + std::string(text) + "'");
    }
    return v;
  };
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    return rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
  }
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw DomainError("cannot parse alpha '" + std::string(text) + "'");
  }
  return Alpha(v);
}

bool Alpha::equals(long long p, long long n) const {
  if (rational_) {
    const long long g = std::gcd(p, n);
    return rational_->num == p / g && rational_->den == n / g;
  }
  const double target = static_cast<double>(p) / static_cast<double>(n);
  return std::abs(value_ - target) <= 4 * std::numeric_limits<double>::epsilon() * target;
}

std::string Alpha::to_string() const {
  if (rational_) return std::to_string(rational_->num) + "/" + std::to_string(rational_->den);
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, value_);
  return std::string(buf, r.ptr);
}

}  // namespace stable_msu
