#pragma once

// Lightning + polynomial approximant assembly.
//
// The rectangular sum splits into a clustered pole part (nodes whose pole
// magnitude is below 1) and a tail that is analytic on a neighbourhood of
// [0, 1]: the far-pole terms plus the constants released by the partial
// fraction split of each clustered term. The tail is then replaced by its
// truncated Chebyshev series.
//
// Everything is built for C = 1 in the reduced variable y = x / C and mapped
// back as  x^a = C^a (x/C)^a:  poles scale by C, residues by C^(1+a) and the
// tail by C^a.

#include <string_view>
#include <vector>

#include "lightning/chebyshev.hpp"
#include "lightning/error.hpp"
#include "lightning/mpnum.hpp"
#include "lightning/poles.hpp"
#include "lightning/scheme.hpp"

namespace lightning {

struct PoleResidueForm {
  PoleSet poles;
  std::vector<BigReal> residues;  // one per pole, all negative
};

struct BuildDiagnostics {
  BigReal trunc_t_bound;  // 3 e^{-T}
  BigReal tail_bound;     // chebyshev truncation bound
  int build_precision_bits = kMinPrecisionBits;
};

struct LPApproximant {
  SchemeParams params;
  PoleResidueForm pole_part;
  ChebTail tail;
  BigReal tail_scale;  // C^alpha
  BuildDiagnostics diagnostics;
};

/// Residues of the clustered poles, in the order of ps.values.
inline PoleResidueForm clustered_residues(const PoleSet& ps) {
  const SchemeParams& p = ps.params;
  PoleResidueForm form;
  form.poles = ps;
  form.residues.reserve(ps.real_poles.size());
  for (std::size_t i = 0; i < ps.real_poles.size(); ++i) {
    const BigReal& pole = ps.real_poles[i];
    const BigReal mag = abs(pole);
    BigReal weight;
    if (p.kind == SchemeKind::Tapered) {
      const BigReal j(static_cast<long>(i + 1));
      weight = p.prefactor / BigReal(2) * sqrt(p.step / j);
    } else {
      weight = p.prefactor * p.step;
    }
    form.residues.push_back(weight * pole * pow(mag, p.alpha));
  }
  return form;
}

/// The tail r2 (tapered) or its uniform analogue in the reduced variable y = x / C,
/// with node-dependent factors precomputed once.
class TailFunction {
 public:
  explicit TailFunction(const SchemeParams& p) {
    const BigReal& t = p.t_cap;
    constant_ = BigReal(0);
    if (p.kind == SchemeKind::Tapered) {
      const BigReal half_k = p.prefactor / BigReal(2);
      for (long j = 1; j <= p.n_total; ++j) {
        const BigReal jj(j);
        const BigReal shifted = sqrt(jj * p.step) - t;
        const BigReal w = half_k * sqrt(p.step / jj) * exp(shifted);
        if (j <= p.n1) {
          constant_ += w;
        } else {
          weights_.push_back(w);
          far_mags_.push_back(exp(shifted / p.alpha));
        }
      }
    } else {
      const BigReal kh = p.prefactor * p.step;
      for (long j = 0; j <= p.n_total; ++j) {
        const BigReal shifted = BigReal(j) * p.step - t;
        const BigReal w = kh * exp(shifted);
        if (j < p.n1) {
          constant_ += w;
        } else {
          weights_.push_back(w);
          far_mags_.push_back(exp(shifted / p.alpha));
        }
      }
    }
  }

  BigReal operator()(const BigReal& y) const {
    BigReal acc = constant_;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      acc += weights_[i] * y / (y + far_mags_[i]);
    }
    return acc;
  }

  const BigReal& constant_part() const { return constant_; }
  std::size_t far_count() const { return weights_.size(); }

 private:
  BigReal constant_;
  std::vector<BigReal> weights_;
  std::vector<BigReal> far_mags_;  // |pole| >= 1
};

/// Tail evaluated at real x in the reduced variable; ps supplies the configuration.
inline BigReal tail_function(const BigReal& x, const PoleSet& ps) {
  if (x.sign() < 0 && ps.axis == Axis::RealAxis) {
    throw Error(ErrorKind::Domain, "tail_function: x must be >= 0");
  }
  return TailFunction(ps.params)(x);
}

enum class N2Mode { FigRule, BoundRule };

inline N2Mode parse_n2_mode(std::string_view s) {
  if (s == "fig") return N2Mode::FigRule;
  if (s == "bound") return N2Mode::BoundRule;
  throw Error(ErrorKind::Format, "unknown tail degree rule '" + std::string(s) + "'");
}

/// Tail degree: ceil(1.3 sqrt(n1)) or ceil(sqrt(n1 step) / log(2 + sqrt 3)) + 2.
inline int n2_rule(int n1, const BigReal& step, N2Mode mode) {
  if (n1 < 1) throw Error(ErrorKind::Domain, "n2_rule: n1 must be >= 1");
  if (mode == N2Mode::FigRule) {
    return static_cast<int>(ceil(BigReal(13) * sqrt(BigReal(n1)) / BigReal(10)).to_long());
  }
  const BigReal r = sqrt(BigReal(n1) * step) / log(bernstein_rho1());
  return static_cast<int>(ceil(r).to_long()) + 2;
}

/// Step to feed n2_rule: h for tapered, (sigma alpha)^2 for uniform, so that sqrt(n1 step) = T either way.
inline BigReal n2_rule_step(const SchemeParams& p) {
  if (p.kind == SchemeKind::Tapered) return p.step;
  const BigReal sa = p.sigma * p.alpha;
  return sa * sa;
}

inline int oversample_default() { return 4; }

inline LPApproximant build_lp(const SchemeParams& p, int oversample = oversample_default()) {
  LPApproximant a;
  a.params = p;
  a.pole_part = clustered_residues(make_pole_set(p));
  // residues are evaluated at the scaled poles, which already gives the C^(1+a) factor
  a.tail_scale = pow(p.c_shift, p.alpha);
  const TailFunction tail(p);
  a.tail = chebyshev_truncate([&](const BigReal& y) { return tail(y); }, p.n2, oversample);
  a.diagnostics.trunc_t_bound = BigReal(3) * exp(-p.t_cap);
  a.diagnostics.tail_bound = a.tail.trunc_bound;
  a.diagnostics.build_precision_bits = working_precision();
  return a;
}

/// Sum of a_j / (t - p_j) with t = x (real axis) or x^2 (imaginary axis).
inline BigReal pole_part(const LPApproximant& a, const BigReal& x) {
  const BigReal t = a.params.axis == Axis::RealAxis ? x : x * x;
  BigReal acc = BigReal::with_precision(std::max(x.precision(), working_precision()));
  const auto& poles = a.pole_part.poles.real_poles;
  const auto& res = a.pole_part.residues;
  for (std::size_t i = 0; i < poles.size(); ++i) acc += res[i] / (t - poles[i]);
  return acc;
}

}  // namespace lightning
