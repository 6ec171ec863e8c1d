#pragma once

// Forward-mode dual numbers over three directions. Nesting Dual<Dual<Dual<double>>>
// yields every partial derivative up to order three of a scalar expression.

#include <array>
#include <cmath>

namespace rfm {

template <class T>
struct Dual {
  T v{};
  std::array<T, 3> d{};

  Dual() = default;
  Dual(double c) : v(c) {}  // NOLINT: implicit lift of constants
  Dual(const T& value, const std::array<T, 3>& deriv) : v(value), d(deriv) {}

  Dual& operator+=(const Dual& o) {
    v += o.v;
    for (int i = 0; i < 3; ++i) d[i] += o.d[i];
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    for (int i = 0; i < 3; ++i) d[i] -= o.d[i];
    return *this;
  }
  Dual& operator*=(const Dual& o) { return *this = *this * o; }
  Dual& operator/=(const Dual& o) { return *this = *this / o; }

  friend Dual operator-(const Dual& a) {
    Dual r;
    r.v = -a.v;
    for (int i = 0; i < 3; ++i) r.d[i] = -a.d[i];
    return r;
  }
  friend Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend Dual operator*(const Dual& a, const Dual& b) {
    Dual r;
    r.v = a.v * b.v;
    for (int i = 0; i < 3; ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
    return r;
  }
  friend Dual operator/(const Dual& a, const Dual& b) {
    Dual r;
    r.v = a.v / b.v;
    const T inv = T(1.0) / b.v;
    for (int i = 0; i < 3; ++i) r.d[i] = (a.d[i] - r.v * b.d[i]) * inv;
    return r;
  }
  friend Dual operator+(const Dual& a, double c) { return a + Dual(c); }
  friend Dual operator+(double c, const Dual& a) { return Dual(c) + a; }
  friend Dual operator-(const Dual& a, double c) { return a - Dual(c); }
  friend Dual operator-(double c, const Dual& a) { return Dual(c) - a; }
  friend Dual operator*(const Dual& a, double c) {
    Dual r;
    r.v = a.v * c;
    for (int i = 0; i < 3; ++i) r.d[i] = a.d[i] * c;
    return r;
  }
  friend Dual operator*(double c, const Dual& a) { return a * c; }
  friend Dual operator/(const Dual& a, double c) { return a * (1.0 / c); }
  friend Dual operator/(double c, const Dual& a) { return Dual(c) / a; }
};

namespace detail {
/// Chain rule: f(a) given f(a.v) and f'(a.v).
template <class T>
Dual<T> chain(const Dual<T>& a, const T& f, const T& df) {
  Dual<T> r;
  r.v = f;
  for (int i = 0; i < 3; ++i) r.d[i] = df * a.d[i];
  return r;
}
}  // namespace detail

template <class T>
Dual<T> sin(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  return detail::chain(a, T(sin(a.v)), T(cos(a.v)));
}
template <class T>
Dual<T> cos(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  return detail::chain(a, T(cos(a.v)), T(-sin(a.v)));
}
template <class T>
Dual<T> exp(const Dual<T>& a) {
  using std::exp;
  const T e = exp(a.v);
  return detail::chain(a, e, e);
}
template <class T>
Dual<T> log(const Dual<T>& a) {
  using std::log;
  return detail::chain(a, T(log(a.v)), T(T(1.0) / a.v));
}
template <class T>
Dual<T> sqrt(const Dual<T>& a) {
  using std::sqrt;
  const T s = sqrt(a.v);
  return detail::chain(a, s, T(T(0.5) / s));
}
template <class T>
Dual<T> tanh(const Dual<T>& a) {
  using std::tanh;
  const T t = tanh(a.v);
  return detail::chain(a, t, T(1.0 - t * t));
}
template <class T>
Dual<T> cosh(const Dual<T>& a) {
  using std::cosh;
  using std::sinh;
  return detail::chain(a, T(cosh(a.v)), T(sinh(a.v)));
}
template <class T>
Dual<T> sinh(const Dual<T>& a) {
  using std::cosh;
  using std::sinh;
  return detail::chain(a, T(sinh(a.v)), T(cosh(a.v)));
}

/// Integer power by repeated multiplication; works for double and any Dual.
template <class S>
S ipow(const S& a, int n) {
  S r(1.0);
  for (int i = 0; i < n; ++i) r = r * a;
  return r;
}

using Dual1 = Dual<double>;
using Dual2 = Dual<Dual1>;
using Dual3 = Dual<Dual2>;

/// Independent variable i at value x for each nesting depth.
inline Dual1 seed_dual1(double x, int i) {
  Dual1 r(x);
  r.d[i] = 1.0;
  return r;
}
inline Dual2 seed_dual2(double x, int i) {
  Dual2 r(seed_dual1(x, i), {});
  r.d[i] = Dual1(1.0);
  return r;
}
inline Dual3 seed_dual3(double x, int i) {
  Dual3 r(seed_dual2(x, i), {});
  r.d[i] = Dual2(1.0);
  return r;
}

}  // namespace rfm
