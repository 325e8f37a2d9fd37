#include <cmath>
#include <numbers>

#include "ulamkit/quad.hpp"

namespace ulamkit::quad {

namespace {

struct Rule {
  std::array<double, kGaussOrder> x{};
  std::array<double, kGaussOrder> w{};
  // P_k(x_i), k = 0..15
  std::array<std::array<double, kGaussOrder>, kGaussOrder> p{};

  Rule() {
    constexpr int n = static_cast<int>(kGaussOrder);
    for (int i = 0; i < n; ++i) {
      // Newton on P_n from the Chebyshev-like initial guess.
      double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1.0);
        const double dz = p1 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      // ascending order
      x[n - 1 - i] = z;
      w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    for (int i = 0; i < n; ++i) {
      double p0 = 1.0, p1 = x[i];
      p[0][i] = 1.0;
      p[1][i] = x[i];
      for (int k = 2; k < n; ++k) {
        const double p2 = ((2 * k - 1) * x[i] * p1 - (k - 1) * p0) / k;
        p[k][i] = p2;
        p0 = p1;
        p1 = p2;
      }
    }
  }
};

const Rule& rule() {
  static const Rule r;
  return r;
}

}  // namespace

const std::array<double, kGaussOrder>& gl_nodes() { return rule().x; }
const std::array<double, kGaussOrder>& gl_weights() { return rule().w; }

LegendreCoeffs legendre_coefficients(const std::array<Complex, kGaussOrder>& v) {
  const Rule& r = rule();
  LegendreCoeffs c{};
  for (std::size_t k = 0; k < kGaussOrder; ++k) {
    Complex s = 0.0;
    for (std::size_t i = 0; i < kGaussOrder; ++i) s += r.w[i] * r.p[k][i] * v[i];
    c[k] = s * (0.5 * static_cast<double>(2 * k + 1));
  }
  return c;
}

Complex legendre_eval(const LegendreCoeffs& c, double xi) {
  Complex s = c[0] + c[1] * xi;
  double p0 = 1.0, p1 = xi;
  for (std::size_t k = 2; k < kGaussOrder; ++k) {
    const double kk = static_cast<double>(k);
    const double p2 = ((2 * kk - 1) * xi * p1 - (kk - 1) * p0) / kk;
    s += c[k] * p2;
    p0 = p1;
    p1 = p2;
  }
  return s;
}

Complex legendre_integral(const LegendreCoeffs& c, double xi) {
  // ∫_{-1}^{ξ} P_0 = ξ + 1;  ∫_{-1}^{ξ} P_k = (P_{k+1} − P_{k−1}) / (2k+1)
  std::array<double, kGaussOrder + 1> p{};
  p[0] = 1.0;
  p[1] = xi;
  for (std::size_t k = 2; k <= kGaussOrder; ++k) {
    const double kk = static_cast<double>(k);
    p[k] = ((2 * kk - 1) * xi * p[k - 1] - (kk - 1) * p[k - 2]) / kk;
  }
  Complex s = c[0] * (xi + 1.0);
  for (std::size_t k = 1; k < kGaussOrder; ++k) {
    s += c[k] * ((p[k + 1] - p[k - 1]) / static_cast<double>(2 * k + 1));
  }
  return s;
}

}  // namespace ulamkit::quad
