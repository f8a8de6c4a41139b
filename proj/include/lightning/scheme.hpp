#pragma once

// One approximation configuration and the two quadrature integrands.
//
// The integral representation
//   x^a = K * int_{-inf}^{inf} x e^t / (e^{t/a} + x) dt,   K = sin(a pi) / (a pi),
// is truncated to [-T, kappa T] and discretized by a rectangular rule, either
// in u = (t + T)^2 with fixed step h = (sigma a)^2 (tapered poles) or in
// u = t + T with step hbar = sigma a / sqrt(N1) (uniform poles). Both give
// T = sigma a sqrt(N1).
//
// Everything here is expressed in the reduced variable x / C; the shift C
// only enters through pole positions and the final scaling (see builder).

#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>

#include "lightning/error.hpp"
#include "lightning/mpnum.hpp"

namespace lightning {

enum class SchemeKind { Tapered, Uniform };
enum class Axis { RealAxis, ImagAxis };

inline const char* to_string(SchemeKind k) { return k == SchemeKind::Tapered ? "tapered" : "uniform"; }
inline const char* to_string(Axis a) { return a == Axis::RealAxis ? "real" : "imag"; }

inline SchemeKind parse_scheme_kind(std::string_view s) {
  if (s == "tapered") return SchemeKind::Tapered;
  if (s == "uniform") return SchemeKind::Uniform;
  throw Error(ErrorKind::Format, "unknown scheme '" + std::string(s) + "'");
}
inline Axis parse_axis(std::string_view s) {
  if (s == "real") return Axis::RealAxis;
  if (s == "imag") return Axis::ImagAxis;
  throw Error(ErrorKind::Format, "unknown axis '" + std::string(s) + "'");
}


struct SchemeParams {
  SchemeKind kind = SchemeKind::Tapered;
  Axis axis = Axis::RealAxis;
  BigReal alpha;
  BigReal kappa;      // alpha / (1 - alpha)
  BigReal sigma;
  BigReal c_shift;    // C
  int n1 = 1;         // clustered poles
  int n2 = 0;         // tail degree
  BigReal step;       // h (tapered) or hbar (uniform)
  BigReal t_cap;      // T
  long n_total = 1;   // N_t (tapered) or bar N_t (uniform)
  BigReal prefactor;  // sin(alpha pi) / (alpha pi)
};

namespace detail {

// alpha = num/den exactly when it is a decimal with at most 9 fractional digits.
inline std::optional<std::pair<std::int64_t, std::int64_t>> as_short_decimal(const BigReal& a) {
  std::int64_t den = 1;
  for (int k = 0; k <= 9; ++k, den *= 10) {
    const BigReal scaled = a * BigReal(static_cast<long>(den));
    const BigReal nearest = round(scaled);
    const BigReal slack = ldexp(BigReal(1), 8 - a.precision()) * max(BigReal(1), abs(scaled));
    if (abs(scaled - nearest) <= slack) {
      std::int64_t num = nearest.to_long();
      const std::int64_t g = std::gcd(num, den);
      return std::make_pair(num / g, den / g);
    }
  }
  return std::nullopt;
}

// ceil(num / den) for positive den.
inline long ceil_div(__int128 num, __int128 den) {
  __int128 q = num / den;
  if (q * den < num) ++q;
  return static_cast<long>(q);
}

// ceil(w * n1 + 1) with w = (kappa + 1)^power = (1 / (1 - alpha))^power.
inline long window_nodes(const BigReal& alpha, int n1, int power) {
  if (auto frac = as_short_decimal(alpha)) {
    const __int128 q = frac->second;
    const __int128 gap = frac->second - frac->first;  // 1 - alpha = gap / q
    __int128 num = n1, den = 1;
    for (int i = 0; i < power; ++i) {
      num *= q;
      den *= gap;
    }
    return ceil_div(num, den) + 1;
  }
  BigReal w = BigReal(1) / (BigReal(1) - alpha);
  if (power == 2) w = w * w;
  return ceil(w * BigReal(n1) + BigReal(1)).to_long();
}

}  // namespace detail

/// Builds a configuration with all derived quantities at the working precision.
inline SchemeParams make_params(SchemeKind kind, Axis axis, const BigReal& alpha, const BigReal& sigma,
                                const BigReal& c_shift, int n1, int n2) {
  if (!(alpha >= from_decimal("0.02", alpha.precision()) && alpha <= from_decimal("0.98", alpha.precision()))) {
    throw Error(ErrorKind::Domain, "alpha must lie in [0.02, 0.98], got " + to_decimal(alpha, 6));
  }
  if (!(sigma > BigReal(0))) throw Error(ErrorKind::Domain, "sigma must be positive");
  if (!(c_shift >= BigReal(1))) throw Error(ErrorKind::Domain, "c_shift must be >= 1");
  if (n1 < 1) throw Error(ErrorKind::Domain, "n1 must be >= 1");
  if (n2 < 0) throw Error(ErrorKind::Domain, "n2 must be >= 0");

  SchemeParams p;
  p.kind = kind;
  p.axis = axis;
  p.alpha = alpha;
  p.sigma = sigma;
  p.c_shift = c_shift;
  p.n1 = n1;
  p.n2 = n2;
  p.kappa = alpha / (BigReal(1) - alpha);
  const BigReal sigma_alpha = sigma * alpha;
  const BigReal root_n1 = sqrt(BigReal(n1));
  p.t_cap = sigma_alpha * root_n1;
  if (kind == SchemeKind::Tapered) {
    p.step = sigma_alpha * sigma_alpha;
    p.n_total = detail::window_nodes(alpha, n1, 2);
  } else {
    p.step = sigma_alpha / root_n1;
    p.n_total = detail::window_nodes(alpha, n1, 1);
  }
  const BigReal alpha_pi = alpha * pi();
  p.prefactor = sin(alpha_pi) / alpha_pi;
  return p;
}

namespace detail {
inline void check_unit_interval(const BigReal& x) {
  if (!(x >= BigReal(0) && x <= BigReal(1))) {
    throw Error(ErrorKind::Domain, "x must lie in [0, 1], got " + to_decimal(x, 6));
  }
}
}  // namespace detail

/// K x e^{s-T} / (e^{(s-T)/alpha} + x), the integrand in t + T = s.
inline BigReal integrand_fbar(const BigReal& u, const BigReal& x, const SchemeParams& p) {
  detail::check_unit_interval(x);
  if (x.is_zero()) return BigReal::with_precision(x.precision());
  const BigReal shifted = u - p.t_cap;
  return p.prefactor * x * exp(shifted) / (exp(shifted / p.alpha) + x);
}

/// fbar(sqrt(u), x) / (2 sqrt(u)), the tapered integrand.
inline BigReal integrand_f(const BigReal& u, const BigReal& x, const SchemeParams& p) {
  detail::check_unit_interval(x);
  if (u.sign() < 0) throw Error(ErrorKind::Domain, "integrand_f: u must be >= 0");
  if (x.is_zero()) return BigReal::with_precision(x.precision());
  if (u.is_zero()) throw Error(ErrorKind::Singularity, "integrand_f is singular at u = 0");
  const BigReal root = sqrt(u);
  return integrand_fbar(root, x, p) / (BigReal(2) * root);
}

}  // namespace lightning
