#pragma once

// Extended-precision real arithmetic over MPFR.
//
// Every BigReal carries its own mantissa width. Fresh values (literals,
// conversions, constants) take the thread's working precision, which is set
// once per pipeline through PrecisionScope. Binary operations round to the
// wider of the two operand precisions. All operations round to nearest, so
// results are deterministic for identical inputs and precision.

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdlib>
#include <string>
#include <string_view>
#include <utility>

#include "lightning/error.hpp"

namespace lightning {

inline constexpr int kMinPrecisionBits = 128;

namespace detail {
inline int& working_bits_slot() {
  thread_local int bits = kMinPrecisionBits;
  return bits;
}
}  // namespace detail

inline int working_precision() { return detail::working_bits_slot(); }

/// Sets the calling thread's working precision for the lifetime of the scope.
class PrecisionScope {
 public:
  explicit PrecisionScope(int bits) : saved_(detail::working_bits_slot()) {
    if (bits < MPFR_PREC_MIN || bits > 1 << 20) {
      throw Error(ErrorKind::InvalidPolicy, "precision out of range: " + std::to_string(bits));
    }
    detail::working_bits_slot() = bits;
  }
  ~PrecisionScope() { detail::working_bits_slot() = saved_; }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  int saved_;
};

class BigReal {
 public:
  BigReal() : BigReal(0L) {}
  BigReal(int v) : BigReal(static_cast<long>(v)) {}
  BigReal(long v) {
    init(working_precision());
    mpfr_set_si(value_, v, MPFR_RNDN);
  }
  BigReal(double v) {
    init(working_precision());
    mpfr_set_d(value_, v, MPFR_RNDN);
  }

  /// Zero with an explicit mantissa width.
  static BigReal with_precision(int bits) {
    BigReal r(NoInit{});
    r.init(bits);
    mpfr_set_zero(r.value_, 1);
    return r;
  }

  BigReal(const BigReal& other) {
    init(other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  BigReal(BigReal&& other) noexcept {
    value_[0] = other.value_[0];
    other.value_[0]._mpfr_d = nullptr;
  }
  BigReal& operator=(const BigReal& other) {
    if (this == &other) return *this;
    if (moved_from()) {
      init(other.precision());
    } else if (precision() != other.precision()) {
      mpfr_set_prec(value_, other.precision());
    }
    mpfr_set(value_, other.value_, MPFR_RNDN);
    return *this;
  }
  BigReal& operator=(BigReal&& other) noexcept {
    if (this != &other) {
      std::swap(value_[0], other.value_[0]);
    }
    return *this;
  }
  ~BigReal() {
    if (!moved_from()) mpfr_clear(value_);
  }

  int precision() const { return static_cast<int>(mpfr_get_prec(value_)); }

  mpfr_srcptr get() const { return value_; }
  mpfr_ptr get() { return value_; }

  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
  /// Integer value, rounding to nearest; throws if it does not fit in a long.
  long to_long() const {
    if (!mpfr_fits_slong_p(value_, MPFR_RNDN)) {
      throw Error(ErrorKind::Domain, "value does not fit in a long");
    }
    return mpfr_get_si(value_, MPFR_RNDN);
  }

  int sign() const { return mpfr_sgn(value_); }
  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  bool is_finite() const { return mpfr_number_p(value_) != 0; }
  bool is_integer() const { return mpfr_integer_p(value_) != 0; }

  BigReal operator-() const {
    BigReal r = with_precision(precision());
    mpfr_neg(r.value_, value_, MPFR_RNDN);
    return r;
  }

  BigReal& operator+=(const BigReal& b) { return inplace(b, mpfr_add); }
  BigReal& operator-=(const BigReal& b) { return inplace(b, mpfr_sub); }
  BigReal& operator*=(const BigReal& b) { return inplace(b, mpfr_mul); }
  BigReal& operator/=(const BigReal& b) { return inplace(b, mpfr_div); }

  friend BigReal operator+(const BigReal& a, const BigReal& b) { return binary(a, b, mpfr_add); }
  friend BigReal operator-(const BigReal& a, const BigReal& b) { return binary(a, b, mpfr_sub); }
  friend BigReal operator*(const BigReal& a, const BigReal& b) { return binary(a, b, mpfr_mul); }
  friend BigReal operator/(const BigReal& a, const BigReal& b) { return binary(a, b, mpfr_div); }

  friend bool operator==(const BigReal& a, const BigReal& b) { return mpfr_equal_p(a.value_, b.value_) != 0; }
  friend std::partial_ordering operator<=>(const BigReal& a, const BigReal& b) {
    if (mpfr_unordered_p(a.value_, b.value_)) return std::partial_ordering::unordered;
    const int c = mpfr_cmp(a.value_, b.value_);
    return c < 0 ? std::partial_ordering::less
                 : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
  }

  /// Applies an MPFR unary routine, rounding to this value's precision.
  template <class Fn>
  BigReal apply(Fn fn) const {
    BigReal r = with_precision(precision());
    fn(r.value_, value_, MPFR_RNDN);
    return r;
  }

 private:
  struct NoInit {};
  explicit BigReal(NoInit) { value_[0]._mpfr_d = nullptr; }

  void init(int bits) { mpfr_init2(value_, bits); }
  bool moved_from() const { return value_[0]._mpfr_d == nullptr; }

  template <class Fn>
  static BigReal binary(const BigReal& a, const BigReal& b, Fn fn) {
    BigReal r = with_precision(std::max(a.precision(), b.precision()));
    fn(r.value_, a.value_, b.value_, MPFR_RNDN);
    return r;
  }
  template <class Fn>
  BigReal& inplace(const BigReal& b, Fn fn) {
    if (b.precision() > precision()) {
      mpfr_prec_round(value_, b.precision(), MPFR_RNDN);
    }
    fn(value_, value_, b.value_, MPFR_RNDN);
    return *this;
  }

  mpfr_t value_;
};

inline BigReal abs(const BigReal& x) { return x.apply(mpfr_abs); }
inline BigReal sqrt(const BigReal& x) { return x.apply(mpfr_sqrt); }
inline BigReal exp(const BigReal& x) { return x.apply(mpfr_exp); }
inline BigReal log(const BigReal& x) { return x.apply(mpfr_log); }
inline BigReal sin(const BigReal& x) { return x.apply(mpfr_sin); }
inline BigReal cos(const BigReal& x) { return x.apply(mpfr_cos); }
inline BigReal floor(const BigReal& x) {
  return x.apply([](mpfr_ptr r, mpfr_srcptr a, mpfr_rnd_t) { mpfr_floor(r, a); });
}
inline BigReal ceil(const BigReal& x) {
  return x.apply([](mpfr_ptr r, mpfr_srcptr a, mpfr_rnd_t) { mpfr_ceil(r, a); });
}
inline BigReal round(const BigReal& x) {
  return x.apply([](mpfr_ptr r, mpfr_srcptr a, mpfr_rnd_t) { mpfr_round(r, a); });
}

/// x^y for x > 0 (x = 0 gives 0 for y > 0).
inline BigReal pow(const BigReal& x, const BigReal& y) {
  if (x.sign() < 0) throw Error(ErrorKind::Domain, "pow: negative base");
  BigReal r = BigReal::with_precision(std::max(x.precision(), y.precision()));
  mpfr_pow(r.get(), x.get(), y.get(), MPFR_RNDN);
  return r;
}

/// x * 2^e, exact.
inline BigReal ldexp(const BigReal& x, long e) {
  BigReal r = BigReal::with_precision(x.precision());
  mpfr_mul_2si(r.get(), x.get(), e, MPFR_RNDN);
  return r;
}

inline const BigReal& min(const BigReal& a, const BigReal& b) { return b < a ? b : a; }
inline const BigReal& max(const BigReal& a, const BigReal& b) { return a < b ? b : a; }

inline BigReal pi() {
  BigReal r = BigReal::with_precision(working_precision());
  mpfr_const_pi(r.get(), MPFR_RNDN);
  return r;
}

/// Unit in the last place of x at x's precision; ulp(0) is the smallest positive value.
inline BigReal ulp(const BigReal& x) {
  BigReal r = BigReal::with_precision(x.precision());
  if (x.is_zero() || !x.is_finite()) {
    mpfr_nextabove(r.get());
    return r;
  }
  mpfr_set_ui_2exp(r.get(), 1, mpfr_get_exp(x.get()) - x.precision(), MPFR_RNDN);
  return r;
}

/// |a - b| measured in ulps of b.
inline double ulp_distance(const BigReal& a, const BigReal& b) {
  return (abs(a - b) / ulp(b)).to_double();
}

struct PrecisionPolicy {
  double target_exponent_rho = 0.0;  // error ~ exp(-rho sqrt(N))
  int n_max = 1;
  int guard_bits = 64;
};

/// Mantissa bits needed to resolve exp(-rho sqrt(n_max)) plus guard bits; never below 128.
inline int required_precision(const PrecisionPolicy& policy) {
  if (!(policy.target_exponent_rho >= 0.0) || policy.n_max < 1 || policy.guard_bits < 0) {
    throw Error(ErrorKind::InvalidPolicy, "precision policy needs rho >= 0, n_max >= 1, guard_bits >= 0");
  }
  const double signal_bits =
      policy.target_exponent_rho * std::sqrt(static_cast<double>(policy.n_max)) * M_LOG2E;
  const int bits = static_cast<int>(std::ceil(signal_bits)) + policy.guard_bits;
  return std::max(kMinPrecisionBits, bits);
}

/// Scientific notation with exactly `digits` significant digits, e.g. "2.718281828e0".
inline std::string to_decimal(const BigReal& x, int digits) {
  if (digits < 1) throw Error(ErrorKind::Domain, "to_decimal: digits must be >= 1");
  if (mpfr_nan_p(x.get())) return "nan";
  if (mpfr_inf_p(x.get())) return x.sign() < 0 ? "-inf" : "inf";
  std::string out;
  if (x.sign() < 0) out.push_back('-');
  if (x.is_zero()) {
    out += "0";
    if (digits > 1) out += "." + std::string(static_cast<std::size_t>(digits - 1), '0');
    return out + "e0";
  }
  mpfr_exp_t exponent = 0;
  char* raw = mpfr_get_str(nullptr, &exponent, 10, static_cast<std::size_t>(digits), x.get(), MPFR_RNDN);
  std::string mantissa(raw[0] == '-' ? raw + 1 : raw);
  mpfr_free_str(raw);
  out.push_back(mantissa[0]);
  if (mantissa.size() > 1) {
    out.push_back('.');
    out.append(mantissa, 1, std::string::npos);
  }
  out += "e" + std::to_string(static_cast<long>(exponent) - 1);
  return out;
}

namespace detail {
inline bool is_decimal_literal(std::string_view s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  std::size_t digits = 0;
  while (i < s.size() && s[i] >= '0' && s[i] <= '9') { ++i; ++digits; }
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') { ++i; ++digits; }
  }
  if (digits == 0) return false;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    std::size_t exp_digits = 0;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') { ++i; ++exp_digits; }
    if (exp_digits == 0) return false;
  }
  return i == s.size();
}
}  // namespace detail

/// Nearest BigReal at `bits` to a signed decimal or scientific literal.
inline BigReal from_decimal(std::string_view s, int bits) {
  if (!detail::is_decimal_literal(s)) {
    throw Error(ErrorKind::Format, "not a decimal literal: '" + std::string(s) + "'");
  }
  BigReal r = BigReal::with_precision(bits);
  const std::string text(s);
  mpfr_strtofr(r.get(), text.c_str(), nullptr, 10, MPFR_RNDN);
  return r;
}

inline BigReal from_decimal(std::string_view s) { return from_decimal(s, working_precision()); }

/// Decimal digits that make to_decimal/from_decimal lossless at `bits`.
inline int lossless_digits(int bits) { return static_cast<int>(bits * 0.302) + 2; }

}  // namespace lightning
