#pragma once

#include <hybridvi/types.hpp>

#include <cmath>

// Double-double (compensated) arithmetic used by the two-halfspace projection
// kernel, where plain doubles lose the corner multipliers to cancellation when
// the halfspace normals are nearly parallel.  Classic error-free transforms:
// two_sum is branch-free Knuth, two_prod leans on the exact fma residual.
// two_sum contains no multiplications, so fp-contraction cannot break it.

namespace vi {

inline double two_sum(double a, double b, double& err) {
  double s = a + b;
  double bb = s - a;
  err = (a - (s - bb)) + (b - bb);
  return s;
}

inline double quick_two_sum(double a, double b, double& err) {
  // requires |a| >= |b|
  double s = a + b;
  err = b - (s - a);
  return s;
}

inline double two_prod(double a, double b, double& err) {
  double p = a * b;
  err = std::fma(a, b, -p);
  return p;
}

struct Dd {
  double hi = 0.0;
  double lo = 0.0;

  Dd() = default;
  Dd(double x) : hi(x), lo(0.0) {}  // NOLINT: implicit promotion intended
  Dd(double h, double l) { hi = two_sum(h, l, lo); }

  double to_double() const { return hi; }  // hi is the correctly rounded value

  friend Dd operator-(Dd a) { return Dd(-a.hi, -a.lo); }

  friend Dd operator+(Dd a, Dd b) {
    double s2, t1, t2;
    double s1 = two_sum(a.hi, b.hi, s2);
    t1 = two_sum(a.lo, b.lo, t2);
    s2 += t1;
    s1 = quick_two_sum(s1, s2, s2);
    s2 += t2;
    s1 = quick_two_sum(s1, s2, s2);
    return Dd(s1, s2);
  }

  friend Dd operator-(Dd a, Dd b) { return a + (-b); }

  friend Dd operator*(Dd a, Dd b) {
    double p2;
    double p1 = two_prod(a.hi, b.hi, p2);
    p2 += a.hi * b.lo + a.lo * b.hi;
    p1 = quick_two_sum(p1, p2, p2);
    return Dd(p1, p2);
  }

  friend Dd operator/(Dd a, Dd b) {
    double q1 = a.hi / b.hi;
    Dd r = a - b * Dd(q1);
    double q2 = r.hi / b.hi;
    r = r - b * Dd(q2);
    double q3 = r.hi / b.hi;
    double e;
    double s = quick_two_sum(q1, q2, e);
    return Dd(s, e) + Dd(q3);
  }

  // Exact sign comparisons via the (error-free up to eps^2) difference; for a
  // normalized pair the hi part carries the sign of the full value.
  friend bool operator<(Dd a, Dd b) { return (a - b).hi < 0.0; }
  friend bool operator>(Dd a, Dd b) { return (a - b).hi > 0.0; }
  friend bool operator<=(Dd a, Dd b) { return (a - b).hi <= 0.0; }
  friend bool operator>=(Dd a, Dd b) { return (a - b).hi >= 0.0; }
};

inline Dd dd_min(Dd a, Dd b) { return a < b ? a : b; }
inline Dd dd_max(Dd a, Dd b) { return a < b ? b : a; }

inline Dd dd_sqrt(Dd a) {
  if (!(a.hi > 0.0)) return Dd(0.0);
  double x = 1.0 / std::sqrt(a.hi);
  double ax = a.hi * x;
  Dd err = a - Dd(ax) * Dd(ax);
  return Dd(ax) + err * Dd(x * 0.5);
}

// Compensated dot product: every elementwise product enters as an exact
// (value, residual) pair, the running sum stays in double-double.
inline Dd dd_dot(const Vector& x, const Vector& y) {
  Dd s(0.0);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    double e;
    double p = two_prod(x[i], y[i], e);
    s = s + Dd(p, e);
  }
  return s;
}

}  // namespace vi
