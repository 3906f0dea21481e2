#pragma once

#include <mpfr.h>

#include <algorithm>
#include <utility>

namespace stable_msu::detail {

/// Minimal value-semantics wrapper over mpfr_t. Every result takes the
/// larger precision of its operands; rounding is to nearest.
class MpfrReal {
 public:
  explicit MpfrReal(mpfr_prec_t prec = 53) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
  MpfrReal(double d, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_d(v_, d, MPFR_RNDN);
  }
  MpfrReal(const MpfrReal& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  MpfrReal(MpfrReal&& o) noexcept {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
  }
  MpfrReal& operator=(const MpfrReal& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  MpfrReal& operator=(MpfrReal&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~MpfrReal() { mpfr_clear(v_); }

  [[nodiscard]] mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
  [[nodiscard]] double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  mpfr_ptr get() { return v_; }
  [[nodiscard]] mpfr_srcptr get() const { return v_; }

  static MpfrReal pi(mpfr_prec_t prec) {
    MpfrReal r(prec);
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
  }

  friend MpfrReal operator+(const MpfrReal& a, const MpfrReal& b) {
    MpfrReal r(std::max(a.precision(), b.precision()));
    mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend MpfrReal operator-(const MpfrReal& a, const MpfrReal& b) {
    MpfrReal r(std::max(a.precision(), b.precision()));
    mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend MpfrReal operator*(const MpfrReal& a, const MpfrReal& b) {
    MpfrReal r(std::max(a.precision(), b.precision()));
    mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend MpfrReal operator/(const MpfrReal& a, const MpfrReal& b) {
    MpfrReal r(std::max(a.precision(), b.precision()));
    mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  MpfrReal operator-() const {
    MpfrReal r(precision());
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
  }
  MpfrReal& operator+=(const MpfrReal& b) {
    mpfr_add(v_, v_, b.v_, MPFR_RNDN);
    return *this;
  }

  friend bool operator<(const MpfrReal& a, const MpfrReal& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator>(const MpfrReal& a, const MpfrReal& b) { return b < a; }
  friend bool operator>=(const MpfrReal& a, const MpfrReal& b) { return !(a < b); }
  friend bool operator<=(const MpfrReal& a, const MpfrReal& b) { return !(b < a); }

  friend MpfrReal abs(const MpfrReal& a) {
    MpfrReal r(a.precision());
    mpfr_abs(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend MpfrReal exp(const MpfrReal& a) {
    MpfrReal r(a.precision());
    mpfr_exp(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend MpfrReal log(const MpfrReal& a) {
    MpfrReal r(a.precision());
    mpfr_log(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend MpfrReal sin(const MpfrReal& a) {
    MpfrReal r(a.precision());
    mpfr_sin(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend MpfrReal lngamma(const MpfrReal& a) {
    MpfrReal r(a.precision());
    mpfr_lngamma(r.v_, a.v_, MPFR_RNDN);
    return r;
  }

 private:
  mpfr_t v_;
};

}  // namespace stable_msu::detail
