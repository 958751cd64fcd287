#pragma once

// Truncated Taylor arithmetic. A Jet stores c[k] = f^(k)(x0) / k! for k < N.

#include <array>
#include <cmath>

namespace pm {

template <int N>
struct Jet {
  std::array<double, N> c{};

  static Jet constant(double v) {
    Jet j;
    j.c[0] = v;
    return j;
  }
  static Jet variable(double x0) {
    Jet j;
    j.c[0] = x0;
    if constexpr (N > 1) j.c[1] = 1.0;
    return j;
  }

  double value() const { return c[0]; }

  // k-th derivative at the expansion point.
  double derivative(int k) const {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return c[k] * f;
  }

  Jet operator-() const {
    Jet r;
    for (int k = 0; k < N; ++k) r.c[k] = -c[k];
    return r;
  }
  Jet& operator+=(const Jet& o) {
    for (int k = 0; k < N; ++k) c[k] += o.c[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (int k = 0; k < N; ++k) c[k] -= o.c[k];
    return *this;
  }
  Jet& operator*=(double s) {
    for (int k = 0; k < N; ++k) c[k] *= s;
    return *this;
  }
};

template <int N>
Jet<N> operator+(Jet<N> a, const Jet<N>& b) { return a += b; }
template <int N>
Jet<N> operator-(Jet<N> a, const Jet<N>& b) { return a -= b; }
template <int N>
Jet<N> operator*(Jet<N> a, double s) { return a *= s; }
template <int N>
Jet<N> operator*(double s, Jet<N> a) { return a *= s; }
template <int N>
Jet<N> operator+(Jet<N> a, double s) {
  a.c[0] += s;
  return a;
}
template <int N>
Jet<N> operator+(double s, Jet<N> a) {
  a.c[0] += s;
  return a;
}
template <int N>
Jet<N> operator-(Jet<N> a, double s) {
  a.c[0] -= s;
  return a;
}
template <int N>
Jet<N> operator-(double s, const Jet<N>& a) {
  Jet<N> r = -a;
  r.c[0] += s;
  return r;
}

template <int N>
Jet<N> operator*(const Jet<N>& a, const Jet<N>& b) {
  Jet<N> r;
  for (int k = 0; k < N; ++k) {
    double s = 0.0;
    for (int i = 0; i <= k; ++i) s += a.c[i] * b.c[k - i];
    r.c[k] = s;
  }
  return r;
}

template <int N>
Jet<N> operator/(const Jet<N>& a, const Jet<N>& b) {
  Jet<N> r;
  for (int k = 0; k < N; ++k) {
    double s = a.c[k];
    for (int i = 1; i <= k; ++i) s -= b.c[i] * r.c[k - i];
    r.c[k] = s / b.c[0];
  }
  return r;
}

template <int N>
Jet<N> operator/(double s, const Jet<N>& b) {
  return Jet<N>::constant(s) / b;
}

template <int N>
Jet<N> exp(const Jet<N>& a) {
  Jet<N> r;
  r.c[0] = std::exp(a.c[0]);
  for (int k = 1; k < N; ++k) {
    double s = 0.0;
    for (int i = 1; i <= k; ++i) s += i * a.c[i] * r.c[k - i];
    r.c[k] = s / k;
  }
  return r;
}

template <int N>
Jet<N> log(const Jet<N>& a) {
  Jet<N> r;
  r.c[0] = std::log(a.c[0]);
  for (int k = 1; k < N; ++k) {
    double s = 0.0;
    for (int i = 1; i < k; ++i) s += i * r.c[i] * a.c[k - i];
    r.c[k] = (a.c[k] - s / k) / a.c[0];
  }
  return r;
}

// a^p for a.c[0] > 0.
template <int N>
Jet<N> pow(const Jet<N>& a, double p) {
  Jet<N> r;
  r.c[0] = std::pow(a.c[0], p);
  for (int k = 1; k < N; ++k) {
    double s = 0.0;
    for (int i = 1; i <= k; ++i) s += (p * i - (k - i)) * a.c[i] * r.c[k - i];
    r.c[k] = s / (k * a.c[0]);
  }
  return r;
}

template <int N>
Jet<N> sqrt(const Jet<N>& a) {
  return pow(a, 0.5);
}

template <int N>
void sincos(const Jet<N>& a, Jet<N>& s, Jet<N>& co) {
  s.c[0] = std::sin(a.c[0]);
  co.c[0] = std::cos(a.c[0]);
  for (int k = 1; k < N; ++k) {
    double ss = 0.0, cc = 0.0;
    for (int i = 1; i <= k; ++i) {
      ss += i * a.c[i] * co.c[k - i];
      cc -= i * a.c[i] * s.c[k - i];
    }
    s.c[k] = ss / k;
    co.c[k] = cc / k;
  }
}

template <int N>
Jet<N> sin(const Jet<N>& a) {
  Jet<N> s, c;
  sincos(a, s, c);
  return s;
}

template <int N>
Jet<N> cos(const Jet<N>& a) {
  Jet<N> s, c;
  sincos(a, s, c);
  return c;
}

template <int N>
void sinhcosh(const Jet<N>& a, Jet<N>& sh, Jet<N>& ch) {
  sh.c[0] = std::sinh(a.c[0]);
  ch.c[0] = std::cosh(a.c[0]);
  for (int k = 1; k < N; ++k) {
    double ss = 0.0, cc = 0.0;
    for (int i = 1; i <= k; ++i) {
      ss += i * a.c[i] * ch.c[k - i];
      cc += i * a.c[i] * sh.c[k - i];
    }
    sh.c[k] = ss / k;
    ch.c[k] = cc / k;
  }
}

// atan via the rational recurrence: (atan a)' = a' / (1 + a^2).
template <int N>
Jet<N> atan(const Jet<N>& a) {
  Jet<N> da;
  for (int k = 0; k + 1 < N; ++k) da.c[k] = (k + 1) * a.c[k + 1];
  Jet<N> q = da / (1.0 + a * a);
  Jet<N> r;
  r.c[0] = std::atan(a.c[0]);
  for (int k = 1; k < N; ++k) r.c[k] = q.c[k - 1] / k;
  return r;
}

// Integer power by repeated multiplication (valid for any sign of a.c[0]).
template <int N>
Jet<N> ipow(const Jet<N>& a, int p) {
  Jet<N> r = Jet<N>::constant(1.0);
  for (int i = 0; i < p; ++i) r = r * a;
  return r;
}

}  // namespace pm
