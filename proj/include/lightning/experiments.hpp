#pragma once

// Convergence and quadrature-error studies over a list of N1 values, and the
// least-squares exponent fit ln(err) ~ c - rho sqrt(n).

#include <algorithm>
#include <cmath>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include "lightning/builder.hpp"
#include "lightning/error.hpp"
#include "lightning/evaluator.hpp"
#include "lightning/mpnum.hpp"
#include "lightning/oracle.hpp"
#include "lightning/scheme.hpp"
#include "lightning/theory.hpp"

namespace lightning {

struct ConvergenceRecord {
  SchemeKind kind = SchemeKind::Tapered;
  Axis axis = Axis::RealAxis;
  BigReal alpha;
  BigReal sigma;
  int n1 = 0;
  int n2 = 0;
  int n = 0;
  BigReal sup_err;
  BigReal argmax_x;
  BigReal predicted_rho;
  BigReal normalized;
};

struct QuadErrRecord {
  SchemeKind kind = SchemeKind::Tapered;
  BigReal alpha;
  BigReal sigma;
  int n1 = 0;
  BigReal sup_quad_err;
};

struct FitResult {
  double rho_hat = 0.0;
  double intercept = 0.0;
  int points_used = 0;
  double residual_rms = 0.0;
};

/// sigma = best_sigma(kind, alpha) when unset.
struct SigmaChoice {
  std::optional<BigReal> explicit_sigma;

  static SigmaChoice best() { return {}; }
  static SigmaChoice fixed(const BigReal& s) { return {s}; }
  BigReal resolve(SchemeKind kind, const BigReal& alpha) const {
    return explicit_sigma ? *explicit_sigma : best_sigma(kind, alpha);
  }
};

/// Tail degree: a rule, or a fixed K when `fixed_degree` is set.
struct N2Choice {
  N2Mode mode = N2Mode::FigRule;
  std::optional<int> fixed_degree;

  int resolve(int n1, const BigReal& rule_step) const {
    return fixed_degree ? *fixed_degree : n2_rule(n1, rule_step, mode);
  }
};

struct RunOptions {
  BigReal c_shift = BigReal(1);
  int n_log = 1000;
  int n_lin = 200;
  int precision_bits = 0;  // 0: caller's working precision
  int threads = 1;
};

namespace detail {

template <class Record, class Cell>
std::vector<Record> run_cells(const std::vector<int>& n1_list, int bits, int threads, Cell&& cell) {
  std::vector<Record> out(n1_list.size());
  auto one = [&](std::size_t i) {
    PrecisionScope scope(bits);
    try {
      out[i] = cell(n1_list[i]);
    } catch (const Error& e) {
      throw e.with_context("n1=" + std::to_string(n1_list[i]));
    }
  };
  if (threads <= 1 || n1_list.size() < 2) {
    for (std::size_t i = 0; i < n1_list.size(); ++i) one(i);
    return out;
  }
  std::vector<std::future<void>> jobs;
  const std::size_t stride = static_cast<std::size_t>(threads);
  for (std::size_t t = 0; t < stride; ++t) {
    jobs.push_back(std::async(std::launch::async, [&, t] {
      for (std::size_t i = t; i < n1_list.size(); i += stride) one(i);
    }));
  }
  for (auto& j : jobs) j.get();
  return out;
}

inline void check_n1_list(const std::vector<int>& n1_list) {
  if (n1_list.empty()) throw Error(ErrorKind::Domain, "n1 list is empty");
  for (std::size_t i = 0; i < n1_list.size(); ++i) {
    if (n1_list[i] < 1) throw Error(ErrorKind::Domain, "n1 values must be >= 1");
    if (i > 0 && n1_list[i] <= n1_list[i - 1]) throw Error(ErrorKind::Domain, "n1 list must be ascending");
  }
}

}  // namespace detail

/// One build and sup-error measurement per N1.
inline std::vector<ConvergenceRecord> run_convergence(SchemeKind kind, Axis axis, const BigReal& alpha,
                                                      const SigmaChoice& sigma_choice,
                                                      const std::vector<int>& n1_list, const N2Choice& n2_choice,
                                                      const RunOptions& opt = {}) {
  detail::check_n1_list(n1_list);
  const int bits = opt.precision_bits > 0 ? opt.precision_bits : working_precision();
  const std::string alpha_text = to_decimal(alpha, lossless_digits(bits));
  const BigReal sigma0 = sigma_choice.resolve(kind, alpha);
  const std::string sigma_text = to_decimal(sigma0, lossless_digits(bits));
  const std::string c_text = to_decimal(opt.c_shift, lossless_digits(bits));
  auto cell = [&](int n1) {
    // re-read the shared inputs at this thread's precision
    const BigReal a = from_decimal(alpha_text);
    const BigReal s = sigma_choice.explicit_sigma ? from_decimal(sigma_text) : best_sigma(kind, a);
    const BigReal c = from_decimal(c_text);
    SchemeParams p = make_params(kind, axis, a, s, c, n1, 0);
    p.n2 = n2_choice.resolve(n1, n2_rule_step(p));
    if (p.n2 < 0) throw Error(ErrorKind::Domain, "tail degree must be >= 0");
    const LPApproximant lp = build_lp(p);
    const SupError se = sup_error(lp, error_grid(p, opt.n_log, opt.n_lin));
    ConvergenceRecord r;
    r.kind = kind;
    r.axis = axis;
    r.alpha = a;
    r.sigma = s;
    r.n1 = n1;
    r.n2 = p.n2;
    r.n = n1 + p.n2;
    r.sup_err = se.max_err;
    r.argmax_x = se.argmax;
    r.predicted_rho = predicted_exponent(kind, a, s).exponent_rho;
    r.normalized = exp(r.predicted_rho * sqrt(BigReal(r.n))) * r.sup_err / stahl_limit(a);
    return r;
  };
  return detail::run_cells<ConvergenceRecord>(n1_list, bits, opt.threads, cell);
}

/// Sup over the error grid of |I - S| (tapered) or |Ibar - Sbar| (uniform), C = 1.
inline std::vector<QuadErrRecord> run_quaderr(SchemeKind kind, const BigReal& alpha, const BigReal& sigma,
                                              const std::vector<int>& n1_list, const RunOptions& opt = {},
                                              const OracleOptions& oracle = {}) {
  detail::check_n1_list(n1_list);
  const int bits = opt.precision_bits > 0 ? opt.precision_bits : working_precision();
  const std::string alpha_text = to_decimal(alpha, lossless_digits(bits));
  const std::string sigma_text = to_decimal(sigma, lossless_digits(bits));
  auto cell = [&](int n1) {
    const BigReal a = from_decimal(alpha_text);
    const BigReal s = from_decimal(sigma_text);
    const SchemeParams p = make_params(kind, Axis::RealAxis, a, s, BigReal(1), n1, 0);
    const RectangularSum sum(p);
    const ErrorGrid grid = error_grid(p, opt.n_log, opt.n_lin);
    BigReal worst(0);
    for (const auto& x : grid.points) {
      const BigReal e = abs(window_integral(x, p, oracle) - sum(x));
      if (e > worst) worst = e;
    }
    QuadErrRecord r;
    r.kind = kind;
    r.alpha = a;
    r.sigma = s;
    r.n1 = n1;
    r.sup_quad_err = worst;
    return r;
  };
  return detail::run_cells<QuadErrRecord>(n1_list, bits, opt.threads, cell);
}

/// Least squares of ln(err) against sqrt(n) over the leading points with err > floor.
inline FitResult fit_exponent(const std::vector<std::pair<int, BigReal>>& points, const BigReal& floor) {
  std::vector<double> xs, ys;
  for (const auto& [n, err] : points) {
    if (!(err > floor)) break;
    xs.push_back(std::sqrt(static_cast<double>(n)));
    ys.push_back(log(err).to_double());
  }
  if (xs.size() < 3) {
    throw Error(ErrorKind::InsufficientData,
                "fit needs >= 3 points above the floor, got " + std::to_string(xs.size()));
  }
  const double m = static_cast<double>(xs.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) throw Error(ErrorKind::InsufficientData, "fit needs at least two distinct n");
  const double slope = sxy / sxx;
  FitResult f;
  f.rho_hat = -slope;
  f.intercept = my - slope * mx;
  f.points_used = static_cast<int>(xs.size());
  double ss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (f.intercept + slope * xs[i]);
    ss += r * r;
  }
  f.residual_rms = std::sqrt(ss / m);
  return f;
}

inline BigReal default_fit_floor(int bits = working_precision()) { return ldexp(BigReal(1), -(bits / 2)); }

inline FitResult fit_convergence(const std::vector<ConvergenceRecord>& records,
                                 const BigReal& floor = default_fit_floor()) {
  std::vector<std::pair<int, BigReal>> pts;
  for (const auto& r : records) pts.emplace_back(r.n, r.sup_err);
  return fit_exponent(pts, floor);
}

inline FitResult fit_quaderr(const std::vector<QuadErrRecord>& records, const BigReal& floor = default_fit_floor()) {
  std::vector<std::pair<int, BigReal>> pts;
  for (const auto& r : records) pts.emplace_back(r.n1, r.sup_quad_err);
  return fit_exponent(pts, floor);
}

/// normalized = e^{rho sqrt(n)} sup_err / G.
inline std::vector<ConvergenceRecord> normalize_by_stahl(std::vector<ConvergenceRecord> records) {
  for (auto& r : records) {
    r.normalized = exp(r.predicted_rho * sqrt(BigReal(r.n))) * r.sup_err / stahl_limit(r.alpha);
  }
  return records;
}

}  // namespace lightning
