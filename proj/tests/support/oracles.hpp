// Reference computations for tests, written independently of the library's
// quadrature and ODE machinery.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <utility>
#include <vector>

namespace oracle {

using C = std::complex<double>;
using Fn = std::function<C(double)>;

/// Adaptive Simpson on [a, b].
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      double tol = 1e-12, int depth = 48) {
  struct S {
    const std::function<double(double)>& f;
    double rec(double a, double b, double fa, double fm, double fb, double whole,
               double tol, int depth) const {
      const double m = 0.5 * (a + b), lm = 0.5 * (a + m), rm = 0.5 * (m + b);
      const double flm = f(lm), frm = f(rm);
      const double left = (m - a) / 6 * (fa + 4 * flm + fm);
      const double right = (b - m) / 6 * (fm + 4 * frm + fb);
      const double diff = left + right - whole;
      if (depth <= 0 || std::abs(diff) <= 15 * tol) return left + right + diff / 15;
      return rec(a, m, fa, flm, fm, left, tol / 2, depth - 1) +
             rec(m, b, fm, frm, fb, right, tol / 2, depth - 1);
    }
  } s{f};
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return s.rec(a, b, fa, fm, fb, (b - a) / 6 * (fa + 4 * fm + fb), tol, depth);
}

/// α x'' + β x' + γ x = f from (t0, x0, x0p) to t1 by an adaptive
/// Cash–Karp Runge–Kutta 4(5) pair with tight tolerances.
inline C second_order_ivp(const Fn& alpha, const Fn& beta, const Fn& gamma,
                          const Fn& f, double t0, C x0, C x0p, double t1,
                          double tol = 1e-13) {
  using Y = std::array<C, 2>;
  auto rhs = [&](double t, const Y& y) -> Y {
    return {y[1], (f(t) - beta(t) * y[1] - gamma(t) * y[0]) / alpha(t)};
  };
  static constexpr double a2 = 0.2, a3 = 0.3, a4 = 0.6, a5 = 1.0, a6 = 0.875;
  static constexpr double b21 = 0.2, b31 = 3.0 / 40, b32 = 9.0 / 40, b41 = 0.3,
                          b42 = -0.9, b43 = 1.2, b51 = -11.0 / 54, b52 = 2.5,
                          b53 = -70.0 / 27, b54 = 35.0 / 27, b61 = 1631.0 / 55296,
                          b62 = 175.0 / 512, b63 = 575.0 / 13824,
                          b64 = 44275.0 / 110592, b65 = 253.0 / 4096;
  static constexpr double c1 = 37.0 / 378, c3 = 250.0 / 621, c4 = 125.0 / 594,
                          c6 = 512.0 / 1771;
  static constexpr double d1 = c1 - 2825.0 / 27648, d3 = c3 - 18575.0 / 48384,
                          d4 = c4 - 13525.0 / 55296, d5 = -277.0 / 14336,
                          d6 = c6 - 0.25;
  Y y = {x0, x0p};
  double t = t0;
  const double dir = t1 >= t0 ? 1.0 : -1.0;
  double h = dir * std::min(1e-3, std::abs(t1 - t0));
  if (h == 0.0) return x0;
  auto axpy = [](const Y& y, std::initializer_list<std::pair<double, const Y*>> ks,
                 double h) {
    Y r = y;
    for (const auto& [c, k] : ks) {
      r[0] += h * c * (*k)[0];
      r[1] += h * c * (*k)[1];
    }
    return r;
  };
  for (int step = 0; step < 10000000; ++step) {
    if (dir * (t + h - t1) > 0) h = t1 - t;
    const Y k1 = rhs(t, y);
    const Y k2 = rhs(t + a2 * h, axpy(y, {{b21, &k1}}, h));
    const Y k3 = rhs(t + a3 * h, axpy(y, {{b31, &k1}, {b32, &k2}}, h));
    const Y k4 = rhs(t + a4 * h, axpy(y, {{b41, &k1}, {b42, &k2}, {b43, &k3}}, h));
    const Y k5 = rhs(t + a5 * h,
                     axpy(y, {{b51, &k1}, {b52, &k2}, {b53, &k3}, {b54, &k4}}, h));
    const Y k6 = rhs(t + a6 * h, axpy(y, {{b61, &k1}, {b62, &k2}, {b63, &k3},
                                          {b64, &k4}, {b65, &k5}}, h));
    const Y yn = axpy(y, {{c1, &k1}, {c3, &k3}, {c4, &k4}, {c6, &k6}}, h);
    const Y e = axpy(Y{}, {{d1, &k1}, {d3, &k3}, {d4, &k4}, {d5, &k5}, {d6, &k6}}, h);
    double err = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double sc = tol * (1.0 + std::max(std::abs(y[i]), std::abs(yn[i])));
      err = std::max(err, std::abs(e[i]) / sc);
    }
    if (err <= 1.0) {
      t += h;
      y = yn;
      if (t == t1) return y[0];
    }
    const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    h *= fac;
  }
  return y[0];
}

/// Roots of a0 λ² + a1 λ + a2 by the schoolbook formula, ordered by real part
/// (largest first).
inline std::pair<C, C> roots(C a0, C a1, C a2) {
  const C s = std::sqrt(a1 * a1 - 4.0 * a0 * a2);
  C r1 = (-a1 + s) / (2.0 * a0), r2 = (-a1 - s) / (2.0 * a0);
  if (r2.real() > r1.real()) std::swap(r1, r2);
  return {r1, r2};
}

/// General solution of t(1−t)x'' + (2−t)x' + x = 0 with data at t = 1/2.
inline double first_example_solution(double t, double x0, double x0p) {
  return 2 * x0 + x0p - (2 * x0 + 3 * x0p) / (8 * t) - (2 * x0 + x0p) * t / 2;
}

/// Case iii constant by brute force from analytic antiderivatives
/// R = ∫Re ρ and P = ∫Re(ρ+β/α):
///   f4(s) = ∫_a^s e^{P(u)−P(s)}/|α(u)| du,
///   K(t)  = ∫_a^t e^{R(t)−R(s)} f4(s) ds,
/// returning max K over n points of (a, b]. a stands in for τ.
inline double case_iii_constant(const std::function<double(double)>& R,
                                const std::function<double(double)>& P,
                                const std::function<double(double)>& inv_abs_alpha,
                                double a, double b, int n = 40, double tol = 1e-10) {
  auto f4 = [&](double s) {
    return simpson([&](double u) { return std::exp(P(u) - P(s)) * inv_abs_alpha(u); },
                   a, s, tol, 30);
  };
  double best = 0.0;
  for (int k = 1; k <= n; ++k) {
    const double t = a + (b - a) * k / n;
    const double K =
        simpson([&](double s) { return std::exp(R(t) - R(s)) * f4(s); }, a, t, tol, 20);
    best = std::max(best, K);
  }
  return best;
}

/// min over c1, c2 of max over a uniform grid on [a, b] of |d − c1 − c2·v|.
/// For fixed c2 the best c1 is the midrange, leaving a convex problem in c2.
inline double minimax_const_plus(const std::function<double(double)>& d,
                                 const std::function<double(double)>& v, double a,
                                 double b, int n = 20001) {
  std::vector<double> D(n), V(n);
  for (int k = 0; k < n; ++k) {
    const double t = a + (b - a) * k / (n - 1);
    D[k] = d(t);
    V[k] = v(t);
  }
  auto width = [&](double c2) {
    double lo = INFINITY, hi = -INFINITY;
    for (int k = 0; k < n; ++k) {
      lo = std::min(lo, D[k] - c2 * V[k]);
      hi = std::max(hi, D[k] - c2 * V[k]);
    }
    return 0.5 * (hi - lo);
  };
  double lo = -1e12, hi = 1e12;
  for (int it = 0; it < 400; ++it) {
    const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    if (width(m1) < width(m2)) hi = m2; else lo = m1;
  }
  return width(0.5 * (lo + hi));
}

}  // namespace oracle
