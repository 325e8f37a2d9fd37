#include <algorithm>
#include <cmath>

#include "ulamkit/errors.hpp"
#include "ulamkit/quad.hpp"

namespace ulamkit::quad {

namespace {

std::size_t ref_break(const PanelLayout& L) {
  const auto& b = L.breakpoints();
  auto it = std::lower_bound(b.begin(), b.end(), L.x_ref());
  if (it == b.end()) return b.size() - 1;
  return static_cast<std::size_t>(it - b.begin());
}

}  // namespace

ExpWeightedIntegral::ExpWeightedIntegral(
    std::shared_ptr<const PanelLayout> layout, Direction dir,
    std::function<double(double x)> h, Exponent E, double existence_share)
    : layout_(std::move(layout)), dir_(dir), E_(E) {
  const PanelLayout& L = *layout_;
  const EndpointMap& map = L.map();
  const std::size_t n = L.panels();
  const auto& w = gl_weights();

  h_nodes_.resize(n);
  h_coeffs_.resize(n);
  // Panel contributions: ∫_panel h t' e^{E(anchor) − E(s)} (forward, anchor
  // = right break) or e^{E(s) − E(anchor)} (backward, anchor = left break).
  std::vector<double> contrib(n, 0.0);
  double hmax = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::array<Complex, kGaussOrder> hc;
    const double hw = L.half_width(k);
    double sum = 0.0;
    const double e_left = E_.at_break(k);
    const double e_right = E_.at_break(k + 1);
    for (std::size_t i = 0; i < kGaussOrder; ++i) {
      const double x = L.node(k, i);
      const double hv = h(x);
      h_nodes_[k][i] = hv;
      hc[i] = hv;
      hmax = std::max(hmax, std::abs(hv));
      const double e_node = E_.at_node(k, i);
      const double kernel = dir_ == Direction::kForward
                                ? std::exp(e_right - e_node)
                                : std::exp(e_node - e_left);
      sum += w[i] * hv * map.dt_dx(x) * kernel;
    }
    h_coeffs_[k] = legendre_coefficients(hc);
    contrib[k] = hw * sum;
  }

  // Recursion, tracking the share carried by the outermost unit of x
  // (at the end the integral starts from).
  acc_.assign(n + 1, 0.0);
  std::vector<double> outer(n + 1, 0.0);
  if (dir_ == Direction::kForward) {
    const double edge = L.x_lo() + 1.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double f = std::exp(E_.at_break(k + 1) - E_.at_break(k));
      acc_[k + 1] = f * acc_[k] + contrib[k];
      outer[k + 1] = f * outer[k] + (L.center(k) < edge ? contrib[k] : 0.0);
    }
  } else {
    const double edge = L.x_hi() - 1.0;
    for (std::size_t k = n; k-- > 0;) {
      const double f = std::exp(E_.at_break(k + 1) - E_.at_break(k));
      acc_[k] = f * acc_[k + 1] + contrib[k];
      outer[k] = f * outer[k + 1] + (L.center(k) > edge ? contrib[k] : 0.0);
    }
  }
  const std::size_t kr = ref_break(L);
  const double total = std::abs(acc_[kr]);
  if (!std::isfinite(total)) {
    divergent_ = true;
    outer_share_ = 1.0;
  } else if (total > 0.0) {
    outer_share_ = std::abs(outer[kr]) / total;
    divergent_ = outer_share_ > existence_share;
  }
  double amax = 0.0;
  for (double a : acc_) {
    if (std::isfinite(a)) amax = std::max(amax, std::abs(a));
  }
  error_ = amax * (E_.c->error_bound() + 1e-13 * static_cast<double>(n));
}

double ExpWeightedIntegral::operator()(double x) const {
  const PanelLayout& L = *layout_;
  const EndpointMap& map = L.map();
  const double slack = 1e-12 * (1.0 + std::abs(x));
  if (x < L.x_lo() - slack || x > L.x_hi() + slack) {
    throw CoverageExceeded("point outside the weighted-integral coverage");
  }
  x = std::clamp(x, L.x_lo(), L.x_hi());
  const std::size_t k = L.panel_of(x);
  const double c = L.center(k);
  const double hw = L.half_width(k);
  const double ex = E_(x);
  // Partial panel: forward covers [x_k, x], backward [x, x_{k+1}].
  const double a = dir_ == Direction::kForward ? L.breakpoints()[k] : x;
  const double b = dir_ == Direction::kForward ? x : L.breakpoints()[k + 1];
  double partial = 0.0;
  if (b > a) {
    const double pc = 0.5 * (a + b);
    const double ph = 0.5 * (b - a);
    for (std::size_t i = 0; i < kGaussOrder; ++i) {
      const double s = pc + ph * gl_nodes()[i];
      const double xi = std::clamp((s - c) / hw, -1.0, 1.0);
      const double hv = legendre_eval(h_coeffs_[k], xi).real();
      const double es = E_(s);
      const double kernel = dir_ == Direction::kForward ? std::exp(ex - es)
                                                        : std::exp(es - ex);
      partial += gl_weights()[i] * hv * map.dt_dx(s) * kernel;
    }
    partial *= ph;
  }
  if (dir_ == Direction::kForward) {
    return std::exp(ex - E_.at_break(k)) * acc_[k] + partial;
  }
  return std::exp(E_.at_break(k + 1) - ex) * acc_[k + 1] + partial;
}

double ExpWeightedIntegral::at_t(double t) const {
  return (*this)(layout_->map().x_of(t));
}

double panel_quadrature(const PanelLayout& L,
                        const std::function<double(double x)>& F, double xa,
                        double xb) {
  if (xa == xb) return 0.0;
  const double sign = xa < xb ? 1.0 : -1.0;
  const double lo = std::min(xa, xb);
  const double hi = std::max(xa, xb);
  double sum = 0.0;
  for (std::size_t k = L.panel_of(lo); k < L.panels(); ++k) {
    const double a = std::max(lo, L.breakpoints()[k]);
    const double b = std::min(hi, L.breakpoints()[k + 1]);
    if (b > a) {
      const double c = 0.5 * (a + b);
      const double h = 0.5 * (b - a);
      double s = 0.0;
      for (std::size_t i = 0; i < kGaussOrder; ++i) {
        s += gl_weights()[i] * F(c + h * gl_nodes()[i]);
      }
      sum += h * s;
    }
    if (L.breakpoints()[k + 1] >= hi) break;
  }
  return sign * sum;
}

}  // namespace ulamkit::quad
