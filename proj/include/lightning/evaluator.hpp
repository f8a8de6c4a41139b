#pragma once

// Approximant evaluation and sup-norm errors on a singularity-aware grid.

#include <algorithm>
#include <vector>

#include "lightning/builder.hpp"
#include "lightning/chebyshev.hpp"
#include "lightning/error.hpp"
#include "lightning/mpnum.hpp"
#include "lightning/oracle.hpp"
#include "lightning/scheme.hpp"

namespace lightning {

struct GridSpec {
  int n_log = 1000;
  int n_lin = 200;
  BigReal log_floor;
};

struct ErrorGrid {
  std::vector<BigReal> points;  // ascending, unique
  GridSpec spec;
};

struct SupError {
  BigReal max_err;
  BigReal argmax;
};

/// x^a (real axis) or |x|^(2a) (imaginary axis), the target function.
inline BigReal target_value(const BigReal& x, const BigReal& alpha, Axis axis) {
  return axis == Axis::RealAxis ? ref_power(x, alpha) : ref_power(x * x, alpha);
}

inline BigReal eval_lp(const LPApproximant& a, const BigReal& x) {
  const bool real = a.params.axis == Axis::RealAxis;
  const BigReal lo = real ? BigReal(0) : BigReal(-1);
  if (!(x >= lo && x <= BigReal(1))) {
    throw Error(ErrorKind::Domain, std::string("eval_lp: x outside ") + (real ? "[0, 1]" : "[-1, 1]") +
                                       ": " + to_decimal(x, 6));
  }
  BigReal acc = pole_part(a, x);
  const BigReal t = real ? x : x * x;
  const BigReal y = a.params.c_shift == BigReal(1) ? t : t / a.params.c_shift;
  acc += a.tail_scale * clenshaw(a.tail.coeffs, y);
  return acc;
}

/// exp(-3 T / alpha) scaled by C, capped below 1.
inline BigReal default_log_floor(const SchemeParams& p) {
  BigReal f = p.c_shift * exp(-(BigReal(3) * p.t_cap / p.alpha));
  return f < BigReal(1) ? f : BigReal(1) / BigReal(2);
}

/// {0, 1}, n_lin equispaced points in (0, 1], n_log log-spaced points in [floor, 1];
/// mirrored to [-1, 0) on the imaginary axis.
inline ErrorGrid error_grid(const SchemeParams& p, int n_log, int n_lin) {
  if (n_log < 1 || n_lin < 1) throw Error(ErrorKind::Domain, "error_grid: n_log and n_lin must be >= 1");
  ErrorGrid g;
  g.spec.n_log = n_log;
  g.spec.n_lin = n_lin;
  g.spec.log_floor = default_log_floor(p);

  std::vector<BigReal> pts;
  pts.reserve(static_cast<std::size_t>(n_log + n_lin + 2));
  pts.emplace_back(0);
  pts.emplace_back(1);
  for (int k = 1; k <= n_lin; ++k) pts.push_back(BigReal(k) / BigReal(n_lin));
  const BigReal log_lo = log(g.spec.log_floor);
  if (n_log == 1) {
    pts.push_back(g.spec.log_floor);
  } else {
    for (int k = 0; k < n_log; ++k) {
      pts.push_back(exp(log_lo * BigReal(n_log - 1 - k) / BigReal(n_log - 1)));
    }
  }
  if (p.axis == Axis::ImagAxis) {
    const std::size_t n = pts.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (!pts[i].is_zero()) pts.push_back(-pts[i]);
    }
  }
  std::sort(pts.begin(), pts.end(), [](const BigReal& a, const BigReal& b) { return a < b; });
  pts.erase(std::unique(pts.begin(), pts.end(), [](const BigReal& a, const BigReal& b) { return a == b; }),
            pts.end());
  g.points = std::move(pts);
  return g;
}

inline ErrorGrid error_grid(const SchemeParams& p) { return error_grid(p, 1000, 200); }

/// max |approx(x) - ref(x)| over the grid; ties go to the smallest x.
template <class Approx, class Ref>
SupError sup_error(Approx&& approx, Ref&& ref, const ErrorGrid& grid) {
  if (grid.points.empty()) throw Error(ErrorKind::Domain, "sup_error: empty grid");
  SupError out{BigReal(-1), grid.points.front()};
  for (const auto& x : grid.points) {
    BigReal e = abs(approx(x) - ref(x));
    if (e > out.max_err) {
      out.max_err = std::move(e);
      out.argmax = x;
    }
  }
  return out;
}

inline SupError sup_error(const LPApproximant& a, const ErrorGrid& grid) {
  return sup_error([&](const BigReal& x) { return eval_lp(a, x); },
                   [&](const BigReal& x) { return target_value(x, a.params.alpha, a.params.axis); }, grid);
}

}  // namespace lightning
