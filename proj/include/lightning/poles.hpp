#pragma once

// The clustered pole families.
//
// Real axis, tapered:  p_j = -C exp(-sigma (sqrt(N1) - sqrt(j))),  j = 1..N1
// Real axis, uniform:  s_m = -C exp(-sigma m / sqrt(N1)),           m = 1..N1
// Imaginary axis: +-i b_j with b_j = sqrt(|p_j|).
//
// Values are stored in order of increasing magnitude. For the uniform family
// the storage index j = N1 - m coincides with the quadrature node index, so
// values[j] = -C exp((j hbar - T) / alpha).

#include <vector>

#include "lightning/error.hpp"
#include "lightning/mpnum.hpp"
#include "lightning/scheme.hpp"

namespace lightning {

struct PoleSet {
  SchemeKind kind = SchemeKind::Tapered;
  Axis axis = Axis::RealAxis;
  std::vector<BigReal> values;      // real poles (RealAxis) or magnitudes b_j (ImagAxis)
  std::vector<BigReal> real_poles;  // the negative real poles the set was derived from
  SchemeParams params;

  std::size_t size() const { return values.size(); }
};

namespace detail {
inline void check_real_poles(const PoleSet& ps) {
  for (const auto& v : ps.real_poles) {
    if (!(v.sign() < 0)) throw Error(ErrorKind::Domain, "pole set contains a non-negative real pole");
  }
}
}  // namespace detail

inline PoleSet tapered_poles(const SchemeParams& p) {
  if (p.kind != SchemeKind::Tapered) throw Error(ErrorKind::Domain, "tapered_poles needs a tapered configuration");
  PoleSet ps;
  ps.kind = p.kind;
  ps.axis = Axis::RealAxis;
  ps.params = p;
  ps.values.reserve(static_cast<std::size_t>(p.n1));
  const BigReal root_n1 = sqrt(BigReal(p.n1));
  for (int j = 1; j <= p.n1; ++j) {
    const BigReal gap = root_n1 - sqrt(BigReal(j));
    ps.values.push_back(-(p.c_shift * exp(-(p.sigma * gap))));
  }
  ps.real_poles = ps.values;
  detail::check_real_poles(ps);
  return ps;
}

inline PoleSet uniform_poles(const SchemeParams& p) {
  if (p.kind != SchemeKind::Uniform) throw Error(ErrorKind::Domain, "uniform_poles needs a uniform configuration");
  PoleSet ps;
  ps.kind = p.kind;
  ps.axis = Axis::RealAxis;
  ps.params = p;
  ps.values.reserve(static_cast<std::size_t>(p.n1));
  const BigReal root_n1 = sqrt(BigReal(p.n1));
  for (int j = 0; j < p.n1; ++j) {
    const BigReal m(p.n1 - j);
    ps.values.push_back(-(p.c_shift * exp(-(p.sigma * m / root_n1))));
  }
  ps.real_poles = ps.values;
  detail::check_real_poles(ps);
  return ps;
}

/// Imaginary-axis magnitudes b_j = sqrt(|p_j|).
inline PoleSet to_imaginary(const PoleSet& ps) {
  if (ps.axis != Axis::RealAxis) throw Error(ErrorKind::Domain, "to_imaginary needs a real-axis pole set");
  PoleSet out = ps;
  out.axis = Axis::ImagAxis;
  out.params.axis = Axis::ImagAxis;
  for (auto& v : out.values) v = sqrt(abs(v));
  return out;
}

/// Pole set for the configuration's kind and axis.
inline PoleSet make_pole_set(const SchemeParams& p) {
  PoleSet real = p.kind == SchemeKind::Tapered ? tapered_poles(p) : uniform_poles(p);
  real.params.axis = p.axis;
  if (p.axis == Axis::RealAxis) return real;
  real.params.axis = Axis::RealAxis;
  return to_imaginary(real);
}

}  // namespace lightning
