#pragma once

// Reference values: x^a, the truncated integrals I and Ibar, and the raw
// rectangular sums S and Sbar. The integrals and sums work in the reduced
// variable (C = 1); callers pass x / C when the configuration is shifted.

#include <map>
#include <mutex>
#include <vector>

#include "lightning/error.hpp"
#include "lightning/mpnum.hpp"
#include "lightning/scheme.hpp"

namespace lightning {

inline BigReal ref_power(const BigReal& x, const BigReal& alpha) {
  if (x.sign() < 0) throw Error(ErrorKind::Domain, "ref_power: x must be >= 0");
  if (x.is_zero()) return BigReal::with_precision(x.precision());
  return pow(x, alpha);
}

struct GaussRule {
  std::vector<BigReal> nodes;    // in (-1, 1)
  std::vector<BigReal> weights;
};

namespace detail {

// P_n(t) and P_n'(t) by the three-term recurrence.
inline std::pair<BigReal, BigReal> legendre(int n, const BigReal& t) {
  BigReal p0(1), p1 = t;
  for (int k = 2; k <= n; ++k) {
    BigReal p2 = (BigReal(2 * k - 1) * t * p1 - BigReal(k - 1) * p0) / BigReal(k);
    p0 = std::move(p1);
    p1 = std::move(p2);
  }
  const BigReal dp = BigReal(n) * (t * p1 - p0) / (t * t - BigReal(1));
  return {p1, dp};
}

inline GaussRule make_gauss_rule(int n) {
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const int bits = working_precision();
  const BigReal tol = ldexp(BigReal(1), 4 - bits);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    BigReal t(std::cos(M_PI * (i + 0.75) / (n + 0.5)));
    for (int iter = 0; iter < 200; ++iter) {
      auto [pn, dpn] = legendre(n, t);
      const BigReal delta = pn / dpn;
      t -= delta;
      if (abs(delta) <= tol) break;
    }
    const auto [pn, dpn] = legendre(n, t);
    const BigReal w = BigReal(2) / ((BigReal(1) - t * t) * dpn * dpn);
    rule.nodes[static_cast<std::size_t>(i)] = -t;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = t;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  return rule;
}

}  // namespace detail

inline constexpr int kGaussNodes = 32;

/// 32-point Gauss-Legendre rule at the working precision, built once per precision.
inline const GaussRule& gauss_rule() {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  const int bits = working_precision();
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(bits);
  if (it == cache.end()) it = cache.emplace(bits, detail::make_gauss_rule(kGaussNodes)).first;
  return it->second;
}

struct OracleOptions {
  int initial_panels = 8;
  int max_doublings = 12;
  int tolerance_slack_bits = 16;  // tolerance = 2^-(bits - slack)
};

struct QuadratureResult {
  BigReal value;
  BigReal change;  // |Q_2n - Q_n| at acceptance
  int panels = 0;
};

inline BigReal oracle_tolerance(const OracleOptions& opt = {}) {
  return ldexp(BigReal(1), -(working_precision() - opt.tolerance_slack_bits));
}

namespace detail {

template <class PanelSum>
QuadratureResult doubling_loop(PanelSum&& panel_sum, const OracleOptions& opt) {
  const BigReal tol = oracle_tolerance(opt);
  int panels = opt.initial_panels;
  BigReal prev = panel_sum(panels);
  for (int d = 0; d < opt.max_doublings; ++d) {
    panels *= 2;
    BigReal next = panel_sum(panels);
    BigReal change = abs(next - prev);
    if (change <= tol * max(abs(next), BigReal(1))) return {std::move(next), std::move(change), panels};
    prev = std::move(next);
  }
  throw Error(ErrorKind::OracleFailure,
              "quadrature did not converge after " + std::to_string(opt.max_doublings) + " doublings");
}

// K int_0^L x e^{s-T} / (e^{(s-T)/alpha} + x) ds with panel-start exponentials
// multiplied by per-node tables instead of two exps per node.
inline QuadratureResult smooth_window_integral(const BigReal& x, const SchemeParams& p, const BigReal& length,
                                               const OracleOptions& opt) {
  check_unit_interval(x);
  if (x.is_zero()) return {BigReal(0), BigReal(0), 0};
  const GaussRule& rule = gauss_rule();
  const BigReal inv_alpha = BigReal(1) / p.alpha;
  auto panel_sum = [&](int panels) {
    const BigReal width = length / BigReal(panels);
    const BigReal half = width / BigReal(2);
    std::vector<BigReal> grow1, grow2, wts;
    grow1.reserve(rule.nodes.size());
    grow2.reserve(rule.nodes.size());
    wts.reserve(rule.nodes.size());
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const BigReal offset = half * (BigReal(1) + rule.nodes[i]);
      grow1.push_back(exp(offset));
      grow2.push_back(exp(offset * inv_alpha));
      wts.push_back(half * rule.weights[i]);
    }
    const BigReal step1 = exp(width);
    const BigReal step2 = exp(width * inv_alpha);
    BigReal start1 = exp(-p.t_cap);
    BigReal start2 = exp(-p.t_cap * inv_alpha);
    BigReal total(0);
    for (int k = 0; k < panels; ++k) {
      if (k > 0 && k % 16 == 0) {
        // refresh to keep the running products from drifting
        const BigReal a = width * BigReal(k) - p.t_cap;
        start1 = exp(a);
        start2 = exp(a * inv_alpha);
      }
      BigReal panel(0);
      for (std::size_t i = 0; i < wts.size(); ++i) {
        panel += wts[i] * (start1 * grow1[i]) / (start2 * grow2[i] + x);
      }
      total += panel;
      start1 *= step1;
      start2 *= step2;
    }
    return p.prefactor * x * total;
  };
  return doubling_loop(panel_sum, opt);
}

}  // namespace detail

/// Composite 32-point Gauss-Legendre on [a, b] with panel doubling.
template <class Fn>
QuadratureResult integrate_gl(Fn&& fn, const BigReal& a, const BigReal& b, const OracleOptions& opt = {}) {
  const GaussRule& rule = gauss_rule();
  auto panel_sum = [&](int panels) {
    const BigReal width = (b - a) / BigReal(panels);
    const BigReal half = width / BigReal(2);
    BigReal total(0);
    for (int k = 0; k < panels; ++k) {
      const BigReal mid = a + width * BigReal(k) + half;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        total += rule.weights[i] * fn(mid + half * rule.nodes[i]);
      }
    }
    return half * total;
  };
  return detail::doubling_loop(panel_sum, opt);
}

/// Upper limit sqrt(N_t h) of the tapered window after u = s^2.
inline BigReal tapered_window_length(const SchemeParams& p) { return sqrt(BigReal(p.n_total) * p.step); }
inline BigReal uniform_window_length(const SchemeParams& p) { return BigReal(p.n_total) * p.step; }

inline QuadratureResult integral_I_detailed(const BigReal& x, const SchemeParams& p, const OracleOptions& opt = {}) {
  if (p.kind != SchemeKind::Tapered) throw Error(ErrorKind::Domain, "integral_I needs a tapered configuration");
  return detail::smooth_window_integral(x, p, tapered_window_length(p), opt);
}

inline QuadratureResult integral_Ibar_detailed(const BigReal& x, const SchemeParams& p,
                                               const OracleOptions& opt = {}) {
  if (p.kind != SchemeKind::Uniform) throw Error(ErrorKind::Domain, "integral_Ibar needs a uniform configuration");
  return detail::smooth_window_integral(x, p, uniform_window_length(p), opt);
}

inline BigReal integral_I(const BigReal& x, const SchemeParams& p, const OracleOptions& opt = {}) {
  return integral_I_detailed(x, p, opt).value;
}

inline BigReal integral_Ibar(const BigReal& x, const SchemeParams& p, const OracleOptions& opt = {}) {
  return integral_Ibar_detailed(x, p, opt).value;
}

/// h sum_{j=1}^{N_t} f(jh, x), ascending j.
inline BigReal rect_sum_S(const BigReal& x, const SchemeParams& p) {
  if (p.kind != SchemeKind::Tapered) throw Error(ErrorKind::Domain, "rect_sum_S needs a tapered configuration");
  detail::check_unit_interval(x);
  BigReal total(0);
  if (x.is_zero()) return total;
  for (long j = 1; j <= p.n_total; ++j) total += integrand_f(BigReal(j) * p.step, x, p);
  return p.step * total;
}

/// hbar sum_{j=0}^{bar N_t} fbar(j hbar, x), ascending j.
inline BigReal rect_sum_Sbar(const BigReal& x, const SchemeParams& p) {
  if (p.kind != SchemeKind::Uniform) throw Error(ErrorKind::Domain, "rect_sum_Sbar needs a uniform configuration");
  detail::check_unit_interval(x);
  BigReal total(0);
  if (x.is_zero()) return total;
  for (long j = 0; j <= p.n_total; ++j) total += integrand_fbar(BigReal(j) * p.step, x, p);
  return p.step * total;
}

/// The rectangular sum for either scheme with x-independent node factors cached,
/// for evaluating many x against one configuration.
class RectangularSum {
 public:
  explicit RectangularSum(const SchemeParams& p) {
    const BigReal inv_alpha = BigReal(1) / p.alpha;
    const bool tapered = p.kind == SchemeKind::Tapered;
    for (long j = tapered ? 1 : 0; j <= p.n_total; ++j) {
      const BigReal u = BigReal(j) * p.step;
      const BigReal s = tapered ? sqrt(u) : u;
      const BigReal shifted = s - p.t_cap;
      BigReal w = p.step * p.prefactor * exp(shifted);
      if (tapered) w /= BigReal(2) * s;
      weights_.push_back(std::move(w));
      denoms_.push_back(exp(shifted * inv_alpha));
    }
  }

  BigReal operator()(const BigReal& x) const {
    detail::check_unit_interval(x);
    BigReal total(0);
    if (x.is_zero()) return total;
    for (std::size_t i = 0; i < weights_.size(); ++i) total += weights_[i] / (denoms_[i] + x);
    return x * total;
  }

 private:
  std::vector<BigReal> weights_;
  std::vector<BigReal> denoms_;
};

inline BigReal rect_sum(const BigReal& x, const SchemeParams& p) {
  return p.kind == SchemeKind::Tapered ? rect_sum_S(x, p) : rect_sum_Sbar(x, p);
}

inline BigReal window_integral(const BigReal& x, const SchemeParams& p, const OracleOptions& opt = {}) {
  return p.kind == SchemeKind::Tapered ? integral_I(x, p, opt) : integral_Ibar(x, p, opt);
}

/// I(x) - S(x) (tapered) or Ibar(x) - Sbar(x) (uniform).
inline BigReal quad_error(const BigReal& x, const SchemeParams& p, const OracleOptions& opt = {}) {
  return window_integral(x, p, opt) - rect_sum(x, p);
}

}  // namespace lightning
