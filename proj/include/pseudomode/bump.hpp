#pragma once

// Smooth step and plateau functions built from sigma(t) = exp(-1/t), t > 0.

#include "pseudomode/jet.hpp"

namespace pm {

namespace detail {
// Below this argument exp(-1/t) and all its scaled derivatives are under 1e-300.
inline constexpr double kSigmaFloor = 1e-3;
}  // namespace detail

// S(t) = sigma(t) / (sigma(t) + sigma(1 - t)): 0 for t <= 0, 1 for t >= 1.
template <int N>
Jet<N> smooth_step(const Jet<N>& t) {
  const double t0 = t.c[0];
  if (t0 <= detail::kSigmaFloor) return Jet<N>::constant(0.0);
  if (t0 >= 1.0 - detail::kSigmaFloor) return Jet<N>::constant(1.0);
  Jet<N> a = exp(-1.0 / t);
  Jet<N> b = exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

inline double smooth_step(double t) {
  return smooth_step(Jet<1>::constant(t)).c[0];
}

// Even plateau: 1 on [-inner, inner], 0 outside (-outer, outer).
template <int N>
Jet<N> plateau(const Jet<N>& x, double inner, double outer) {
  Jet<N> ax = x.c[0] < 0.0 ? -x : x;
  return smooth_step((outer - ax) * (1.0 / (outer - inner)));
}

}  // namespace pm
