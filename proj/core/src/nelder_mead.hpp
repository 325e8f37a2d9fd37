// Small 2-D Nelder–Mead and a minimax fit of a target by two basis vectors,
// shared by the nearest-solution search and the instability probe.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace ulamkit::detail {

struct NmResult {
  std::array<double, 2> z{};
  double f = 0.0;
  std::size_t evaluations = 0;
};

inline NmResult nelder_mead(const std::function<double(double, double)>& F,
                            std::array<double, 2> z0, double step,
                            std::size_t max_iter = 600, double xtol = 1e-11) {
  using P = std::array<double, 2>;
  std::array<P, 3> s = {z0, P{z0[0] + step, z0[1]}, P{z0[0], z0[1] + step}};
  std::array<double, 3> f{};
  std::size_t evals = 0;
  auto eval = [&](const P& p) {
    ++evals;
    const double v = F(p[0], p[1]);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };
  for (int i = 0; i < 3; ++i) f[i] = eval(s[i]);
  for (std::size_t it = 0; it < max_iter; ++it) {
    std::array<int, 3> o = {0, 1, 2};
    std::sort(o.begin(), o.end(), [&](int a, int b) { return f[a] < f[b]; });
    const P best = s[o[0]], mid = s[o[1]], worst = s[o[2]];
    const double fb = f[o[0]], fm = f[o[1]], fw = f[o[2]];
    double size = 0.0;
    for (int i = 1; i < 3; ++i) {
      size = std::max({size, std::abs(s[o[i]][0] - best[0]),
                       std::abs(s[o[i]][1] - best[1])});
    }
    if (size < xtol * (1.0 + std::abs(best[0]) + std::abs(best[1]))) break;
    const P c = {0.5 * (best[0] + mid[0]), 0.5 * (best[1] + mid[1])};
    auto along = [&](double k) {
      return P{c[0] + k * (worst[0] - c[0]), c[1] + k * (worst[1] - c[1])};
    };
    const P r = along(-1.0);
    const double fr = eval(r);
    if (fr < fb) {
      const P e = along(-2.0);
      const double fe = eval(e);
      if (fe < fr) {
        s[o[2]] = e;
        f[o[2]] = fe;
      } else {
        s[o[2]] = r;
        f[o[2]] = fr;
      }
    } else if (fr < fm) {
      s[o[2]] = r;
      f[o[2]] = fr;
    } else {
      const P k = fr < fw ? along(-0.5) : along(0.5);
      const double fk = eval(k);
      if (fk < std::min(fr, fw)) {
        s[o[2]] = k;
        f[o[2]] = fk;
      } else {
        // Shrink toward the best vertex.
        for (int i = 1; i < 3; ++i) {
          P& v = s[o[i]];
          v = {best[0] + 0.5 * (v[0] - best[0]), best[1] + 0.5 * (v[1] - best[1])};
          f[o[i]] = eval(v);
        }
      }
    }
  }
  const int b = static_cast<int>(std::min_element(f.begin(), f.end()) - f.begin());
  return {s[b], f[b], evals};
}

struct MinimaxFit {
  double c1 = 0.0, c2 = 0.0;  // coefficients of the two basis vectors
  double value = 0.0;         // max_k |d_k − c1 u_k − c2 v_k|
  std::size_t index = 0;      // where the max is attained
  std::size_t evaluations = 0;
};

/// min over (c1, c2) of max_k |d_k − c1 u_k − c2 v_k|. Starts from a 3×3 grid
/// around the least-squares fit (in scaled coordinates) plus the origin.
inline MinimaxFit minimax_fit_direct(const std::vector<double>& d,
                              const std::vector<double>& u,
                              const std::vector<double>& v) {
  const std::size_t n = d.size();
  double sd = 0.0, su = 0.0, sv = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sd = std::max(sd, std::abs(d[k]));
    su = std::max(su, std::abs(u[k]));
    sv = std::max(sv, std::abs(v[k]));
  }
  MinimaxFit out;
  auto residual = [&](double c1, double c2, std::size_t* at) {
    double m = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double e = std::abs(d[k] - c1 * u[k] - c2 * v[k]);
      if (e > m || std::isnan(e)) {
        m = std::isnan(e) ? std::numeric_limits<double>::infinity() : e;
        if (at) *at = k;
      }
    }
    return m;
  };
  out.value = residual(0.0, 0.0, &out.index);
  if (sd == 0.0 || n == 0) return out;
  // Scaled unknowns: c1 = z1·sd/su, c2 = z2·sd/sv.
  const double k1 = su > 0 ? sd / su : 0.0;
  const double k2 = sv > 0 ? sd / sv : 0.0;
  auto F = [&](double z1, double z2) {
    return residual(z1 * k1, z2 * k2, nullptr) / sd;
  };
  // Least squares in scaled coordinates.
  double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double x1 = u[k] * k1 / sd, x2 = v[k] * k2 / sd, y = d[k] / sd;
    a11 += x1 * x1;
    a12 += x1 * x2;
    a22 += x2 * x2;
    b1 += x1 * y;
    b2 += x2 * y;
  }
  std::array<double, 2> ls = {0.0, 0.0};
  const double det = a11 * a22 - a12 * a12;
  if (std::abs(det) > 1e-14 * std::max(1.0, a11 * a22)) {
    ls = {(a22 * b1 - a12 * b2) / det, (a11 * b2 - a12 * b1) / det};
  }
  double best = out.value / sd;
  std::array<double, 2> bz = {0.0, 0.0};
  for (int i = -1; i <= 1; ++i) {
    for (int j = -1; j <= 1; ++j) {
      const NmResult r =
          nelder_mead(F, {ls[0] + 0.5 * i, ls[1] + 0.5 * j}, 0.25);
      out.evaluations += r.evaluations;
      if (r.f < best) {
        best = r.f;
        bz = r.z;
      }
    }
  }
  out.c1 = bz[0] * k1;
  out.c2 = bz[1] * k2;
  out.value = residual(out.c1, out.c2, &out.index);
  return out;
}

/// minimax_fit_direct, preconditioned: when one sample dominates the basis
/// by orders of magnitude (a singular or exponentially growing member), the
/// combinations that stay moderate form a thin valley the simplex cannot
/// follow. Rotating to the combination that vanishes at that sample opens
/// it up; the unrotated fit is tried as well.
inline MinimaxFit minimax_fit(const std::vector<double>& d,
                              const std::vector<double>& u,
                              const std::vector<double>& v) {
  const std::size_t n = d.size();
  if (n < 3) return minimax_fit_direct(d, u, v);
  std::vector<double> mag(n);
  std::size_t top = 0;
  for (std::size_t k = 0; k < n; ++k) {
    mag[k] = std::hypot(u[k], v[k]);
    if (mag[k] > mag[top]) top = k;
  }
  std::vector<double> sorted = mag;
  std::nth_element(sorted.begin(), sorted.begin() + n / 2, sorted.end());
  const double median = sorted[n / 2];
  if (!(mag[top] > 1e6 * median) || !std::isfinite(mag[top])) {
    return minimax_fit_direct(d, u, v);
  }
  const double cu = u[top] / mag[top], cv = v[top] / mag[top];
  std::vector<double> p(n), q(n);
  for (std::size_t k = 0; k < n; ++k) {
    p[k] = cv * u[k] - cu * v[k];  // vanishes at `top`
    q[k] = cu * u[k] + cv * v[k];
  }
  MinimaxFit f = minimax_fit_direct(d, p, q);
  const double a = f.c1, b = f.c2;
  f.c1 = a * cv + b * cu;
  f.c2 = -a * cu + b * cv;
  // Exponential pairs can go the other way; keep whichever fit is better.
  MinimaxFit g = minimax_fit_direct(d, u, v);
  g.evaluations += f.evaluations;
  f.evaluations = g.evaluations;
  return f.value <= g.value ? f : g;
}

}  // namespace ulamkit::detail
