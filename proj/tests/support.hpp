#pragma once

#include <random>
#include <string>

#include "catch_amalgamated.hpp"
#include "lightning/mpnum.hpp"

namespace lt = lightning;

namespace testing_support {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(0x5eed1234abcdULL);
  return gen;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

/// 10^{u} with u uniform in [lo, hi].
inline lt::BigReal log_uniform(double lo_exp10, double hi_exp10) {
  const lt::BigReal ten(10);
  return lt::pow(ten, lt::BigReal(uniform(lo_exp10, hi_exp10)));
}

/// Uniform in (0, 1) with full working precision mantissa.
inline lt::BigReal unit_random() {
  lt::BigReal acc(0);
  lt::BigReal scale(1);
  for (int i = 0; i < (lt::working_precision() + 51) / 52; ++i) {
    scale = lt::ldexp(scale, -52);
    acc += lt::BigReal(static_cast<double>(rng()() >> 12)) * scale;
  }
  return acc;
}

inline double ulps(const lt::BigReal& got, const lt::BigReal& want) { return lt::ulp_distance(got, want); }

inline std::string show(const lt::BigReal& x) { return lt::to_decimal(x, 25); }

}  // namespace testing_support
