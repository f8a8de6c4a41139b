#pragma once

// Truncated Chebyshev series on [0, 1] in the shifted basis T_k(2x - 1).

#include <cmath>
#include <vector>

#include "lightning/error.hpp"
#include "lightning/mpnum.hpp"

namespace lightning {

struct ChebTail {
  int degree = 0;
  std::vector<BigReal> coeffs;  // degree + 1 entries
  BigReal v_max;                // max sampled |g|
  BigReal trunc_bound;          // 2 V / ((rho1 - 1) rho1^degree), rho1 = 2 + sqrt(3)
};

inline BigReal bernstein_rho1() { return BigReal(2) + sqrt(BigReal(3)); }

/// A priori truncation bound for a function bounded by v on the rho1 ellipse.
inline BigReal chebyshev_trunc_bound(const BigReal& v, int degree) {
  const BigReal rho = bernstein_rho1();
  return BigReal(2) * v / ((rho - BigReal(1)) * pow(rho, BigReal(degree)));
}

/// sum_k c_k T_k(2x - 1) by Clenshaw's recurrence.
inline BigReal clenshaw(const std::vector<BigReal>& coeffs, const BigReal& x) {
  if (coeffs.empty()) return BigReal::with_precision(x.precision());
  const BigReal t = BigReal(2) * x - BigReal(1);
  const BigReal two_t = t + t;
  BigReal b1 = BigReal::with_precision(x.precision());
  BigReal b2 = BigReal::with_precision(x.precision());
  for (std::size_t k = coeffs.size() - 1; k >= 1; --k) {
    BigReal b0 = coeffs[k] + two_t * b1 - b2;
    b2 = std::move(b1);
    b1 = std::move(b0);
  }
  return coeffs[0] + t * b1 - b2;
}

/// Chebyshev-Lobatto points of [0, 1]: x_i = (1 + cos(pi i / (n - 1))) / 2, descending from 1 to 0.
inline std::vector<BigReal> lobatto_points(int n) {
  if (n < 2) throw Error(ErrorKind::Domain, "lobatto_points needs n >= 2");
  std::vector<BigReal> xs;
  xs.reserve(static_cast<std::size_t>(n));
  const BigReal step = pi() / BigReal(n - 1);
  for (int i = 0; i < n; ++i) {
    if (i == 0) {
      xs.emplace_back(1);
    } else if (i == n - 1) {
      xs.emplace_back(0);
    } else {
      xs.push_back((BigReal(1) + cos(step * BigReal(i))) / BigReal(2));
    }
  }
  return xs;
}

/// Degree-n2 Chebyshev truncation of g from oversample * (n2 + 1) Lobatto samples,
/// using a direct discrete cosine transform.
template <class Fn>
ChebTail chebyshev_truncate(Fn&& g, int n2, int oversample = 4) {
  if (n2 < 0) throw Error(ErrorKind::Domain, "chebyshev_truncate: n2 must be >= 0");
  if (oversample < 4) throw Error(ErrorKind::Domain, "chebyshev_truncate: oversample must be >= 4");
  const int n = oversample * (n2 + 1);
  const int m = n - 1;
  const std::vector<BigReal> xs = lobatto_points(n);

  std::vector<BigReal> samples;
  samples.reserve(xs.size());
  BigReal v = BigReal(0);
  for (const auto& x : xs) {
    samples.push_back(g(x));
    v = max(v, abs(samples.back()));
  }

  // cos(pi r / m) for r in [0, 2m); k i is reduced mod 2m.
  std::vector<BigReal> cos_table;
  cos_table.reserve(static_cast<std::size_t>(2 * m));
  const BigReal angle = pi() / BigReal(m);
  for (int r = 0; r < 2 * m; ++r) cos_table.push_back(cos(angle * BigReal(r)));

  ChebTail tail;
  tail.degree = n2;
  tail.coeffs.reserve(static_cast<std::size_t>(n2 + 1));
  const BigReal scale = BigReal(2) / BigReal(m);
  for (int k = 0; k <= n2; ++k) {
    BigReal acc = (samples[0] + (k % 2 == 0 ? samples[m] : -samples[m])) / BigReal(2);
    for (int i = 1; i < m; ++i) {
      const long r = (static_cast<long>(k) * i) % (2L * m);
      acc += samples[static_cast<std::size_t>(i)] * cos_table[static_cast<std::size_t>(r)];
    }
    BigReal c = scale * acc;
    if (k == 0) c /= BigReal(2);
    tail.coeffs.push_back(std::move(c));
  }
  tail.v_max = v;
  tail.trunc_bound = chebyshev_trunc_bound(v, n2);
  return tail;
}

}  // namespace lightning
