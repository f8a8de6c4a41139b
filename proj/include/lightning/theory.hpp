#pragma once

// Closed-form predictions: convergence exponents, optimal sigma, the limit
// constant of best rational approximation, the location x* of the quadrature
// error peak, M0, and the bounds on Q(x).

#include <utility>

#include "lightning/error.hpp"
#include "lightning/mpnum.hpp"
#include "lightning/scheme.hpp"

namespace lightning {

enum class RateRegime { Saturated, QuadratureLimited, Boundary };

inline const char* to_string(RateRegime r) {
  switch (r) {
    case RateRegime::Saturated: return "saturated";
    case RateRegime::QuadratureLimited: return "quadrature-limited";
    case RateRegime::Boundary: return "boundary";
  }
  return "?";
}

struct RateModel {
  SchemeKind kind = SchemeKind::Tapered;
  BigReal alpha;
  BigReal sigma;
  BigReal exponent_rho;  // error ~ exp(-rho sqrt(N))
  RateRegime regime = RateRegime::Boundary;
};

namespace detail {
// Equality up to a few ulps at the working precision.
inline bool nearly_equal(const BigReal& a, const BigReal& b) {
  const BigReal scale = max(abs(a), abs(b));
  return abs(a - b) <= ldexp(scale, 8 - working_precision());
}

// ceil that ignores rounding noise just above an integer.
inline long stable_ceil(const BigReal& v) {
  const BigReal r = round(v);
  if (nearly_equal(v, r)) return r.to_long();
  return ceil(v).to_long();
}
}  // namespace detail

/// rho = min(sigma alpha, c pi^2 / sigma), c = 4 (tapered) or 2 (uniform).
inline RateModel predicted_exponent(SchemeKind kind, const BigReal& alpha, const BigReal& sigma) {
  if (!(alpha > BigReal(0) && alpha < BigReal(1))) throw Error(ErrorKind::Domain, "alpha must lie in (0, 1)");
  if (!(sigma > BigReal(0))) throw Error(ErrorKind::Domain, "sigma must be positive");
  const BigReal pi2 = pi() * pi();
  const BigReal first = sigma * alpha;
  const BigReal second = BigReal(kind == SchemeKind::Tapered ? 4 : 2) * pi2 / sigma;
  RateModel m;
  m.kind = kind;
  m.alpha = alpha;
  m.sigma = sigma;
  if (detail::nearly_equal(first, second)) {
    m.regime = RateRegime::Boundary;
    m.exponent_rho = min(first, second);
  } else if (first < second) {
    m.regime = RateRegime::Saturated;
    m.exponent_rho = first;
  } else {
    m.regime = RateRegime::QuadratureLimited;
    m.exponent_rho = second;
  }
  return m;
}

/// 2 pi / sqrt(alpha) (tapered) or sqrt(2) pi / sqrt(alpha) (uniform).
inline BigReal best_sigma(SchemeKind kind, const BigReal& alpha) {
  if (!(alpha > BigReal(0) && alpha < BigReal(1))) throw Error(ErrorKind::Domain, "alpha must lie in (0, 1)");
  const BigReal c = kind == SchemeKind::Tapered ? BigReal(2) : sqrt(BigReal(2));
  return c * pi() / sqrt(alpha);
}

/// 4^(1+alpha) sin(alpha pi).
inline BigReal stahl_limit(const BigReal& alpha) {
  return pow(BigReal(4), BigReal(1) + alpha) * sin(alpha * pi());
}

/// Minimizer of g over u > 1: (1 + (1 - 2a) sqrt(4a - 4a^2 + 1)) / (2 (1 - a)^2).
inline BigReal u_star(const BigReal& alpha) {
  if (!(alpha > BigReal(0) && alpha < BigReal(1))) throw Error(ErrorKind::Domain, "u_star: alpha must lie in (0, 1)");
  const BigReal one(1);
  const BigReal gap = one - alpha;
  const BigReal disc = BigReal(4) * alpha - BigReal(4) * alpha * alpha + one;
  return (one + (one - BigReal(2) * alpha) * sqrt(disc)) / (BigReal(2) * gap * gap);
}

/// g(u) = ((sqrt(u)/kappa + 1) / (sqrt(u) - 1)) e^{(sqrt(u) - T)/alpha}.
inline BigReal g_of_u(const BigReal& u, const BigReal& alpha, const BigReal& t_cap) {
  if (!(u > BigReal(1))) throw Error(ErrorKind::Domain, "g_of_u: u must be > 1");
  const BigReal kappa = alpha / (BigReal(1) - alpha);
  const BigReal r = sqrt(u);
  return (r / kappa + BigReal(1)) / (r - BigReal(1)) * exp((r - t_cap) / alpha);
}

struct SingularityInfo {
  BigReal u_star;
  BigReal gamma;
  BigReal x_star;
  BigReal alpha;
  BigReal t_cap;
};

inline SingularityInfo x_star(const BigReal& alpha, const BigReal& t_cap) {
  SingularityInfo s;
  s.alpha = alpha;
  s.t_cap = t_cap;
  s.u_star = u_star(alpha);
  const BigReal kappa = alpha / (BigReal(1) - alpha);
  const BigReal r = sqrt(s.u_star);
  s.gamma = r + alpha * log((r / kappa + BigReal(1)) / (r - BigReal(1)));
  s.x_star = g_of_u(s.u_star, alpha, t_cap);
  return s;
}

/// 2 max{sigma^2/4, 1 + ceil(9 pi^2 / sigma^2), 2 ceil((1 + sqrt(pi/sigma))^4)}, rounded up.
inline long m_zero(const BigReal& sigma) {
  if (!(sigma > BigReal(0))) throw Error(ErrorKind::Domain, "m_zero: sigma must be positive");
  const BigReal s2 = sigma * sigma;
  const BigReal first = s2 / BigReal(4);
  const BigReal second(1 + detail::stable_ceil(BigReal(9) * pi() * pi() / s2));
  const BigReal root = BigReal(1) + sqrt(pi() / sigma);
  const BigReal r2 = root * root;
  const BigReal third(2 * detail::stable_ceil(r2 * r2));
  const BigReal m = BigReal(2) * max(first, max(second, third));
  return detail::stable_ceil(m);
}

/// e^{sigma sqrt(2 M0)}, reported only.
inline BigReal rate_prefactor(const BigReal& sigma) {
  return exp(sigma * sqrt(BigReal(2) * BigReal(m_zero(sigma))));
}

struct QBound {
  BigReal eta;
  BigReal lower;
  BigReal upper;
  BigReal x_min;  // interior minimizer of Q when eta < 1, else 0
};

/// Q(x) = x^a / (x^{eta a} e^{eta T} - 1).
inline BigReal q_function(const BigReal& x, const BigReal& alpha, const BigReal& eta, const BigReal& t_cap) {
  if (!(x > BigReal(0))) throw Error(ErrorKind::Domain, "q_function: x must be > 0");
  return pow(x, alpha) / (pow(x, eta * alpha) * exp(eta * t_cap) - BigReal(1));
}

inline BigReal q_eta(const BigReal& alpha, const BigReal& sigma) {
  return BigReal(4) * pi() * pi() / (sigma * sigma * alpha);
}

/// Bounds on Q over [x*, 1].
inline QBound q_bounds(const BigReal& alpha, const BigReal& sigma, const BigReal& t_cap) {
  if (!(sigma > BigReal(0))) throw Error(ErrorKind::Domain, "q_bounds: sigma must be positive");
  QBound q;
  q.eta = q_eta(alpha, sigma);
  if (detail::nearly_equal(q.eta, BigReal(1))) q.eta = BigReal(1);
  const SingularityInfo s = x_star(alpha, t_cap);
  const BigReal one(1);
  const BigReal at_one = one / (exp(q.eta * t_cap) - one);
  const BigReal at_star = exp(s.gamma) * exp(-t_cap) / (exp(q.eta * s.gamma) - one);
  q.x_min = BigReal(0);
  if (q.eta >= one) {
    q.lower = at_one;
    q.upper = at_star;
  } else {
    const BigReal gap = one - q.eta;
    q.lower = pow(gap, one - one / q.eta) * exp(-t_cap) / q.eta;
    q.upper = max(at_one, at_star);
    q.x_min = pow(pow(gap, -(one / q.eta)) * exp(-t_cap), one / alpha);
  }
  return q;
}

/// Pole u_k of the tapered integrand in the complex u plane: (real, imaginary).
inline std::pair<BigReal, BigReal> integrand_pole(int k, const BigReal& x, const BigReal& alpha, const BigReal& t_cap) {
  if (!(x > BigReal(0))) throw Error(ErrorKind::Domain, "integrand_pole: x must be > 0");
  const BigReal lever = t_cap + alpha * log(x);
  const BigReal odd(2 * k - 1);
  const BigReal apo = alpha * pi() * odd;
  return {lever * lever - apo * apo, BigReal(2) * apo * lever};
}

struct TruncBounds {
  BigReal e1;      // 2 e^{-T}
  BigReal e_full;  // 3 e^{-T}
};

inline TruncBounds trunc_bounds(const BigReal& t_cap) {
  const BigReal decay = exp(-t_cap);
  return {BigReal(2) * decay, BigReal(3) * decay};
}

}  // namespace lightning
