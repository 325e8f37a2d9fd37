#include <algorithm>
#include <cmath>

#include "ulamkit/errors.hpp"
#include "ulamkit/quad.hpp"

namespace ulamkit::quad {

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::kLimit: return "limit";
    case StopReason::kExponentBudget: return "exponent_budget";
    case StopReason::kResolution: return "resolution";
  }
  return "limit";
}

double PanelLayout::node(std::size_t k, std::size_t i) const {
  return center(k) + half_width(k) * gl_nodes()[i];
}

std::size_t PanelLayout::panel_of(double x) const {
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
  if (it == breaks_.begin()) return 0;
  const std::size_t k = static_cast<std::size_t>(it - breaks_.begin()) - 1;
  return std::min(k, panels() - 1);
}

namespace {

using NodeValues = std::array<Complex, kGaussOrder>;

struct Panel {
  double a, b;
  std::vector<NodeValues> values;  // per integrand, Jacobian included
  std::vector<LegendreCoeffs> coeffs;
};

// Evaluates every integrand on [a, b]; returns false when a value cannot be
// computed or is not finite.
bool sample_panel(const EndpointMap& map,
                  const std::vector<IntegrandSpec>& gs, double a, double b,
                  Panel& out) {
  out.a = a;
  out.b = b;
  out.values.assign(gs.size(), NodeValues{});
  const double c = 0.5 * (a + b);
  const double hw = 0.5 * (b - a);
  for (std::size_t i = 0; i < kGaussOrder; ++i) {
    const double x = c + hw * gl_nodes()[i];
    const double t = map.t(x);
    const double jac = map.dt_dx(x);
    for (std::size_t j = 0; j < gs.size(); ++j) {
      Complex v;
      try {
        v = gs[j].g(t) * jac;
      } catch (const Error&) {
        return false;
      }
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
      out.values[j][i] = v;
    }
  }
  out.coeffs.resize(gs.size());
  for (std::size_t j = 0; j < gs.size(); ++j) {
    out.coeffs[j] = legendre_coefficients(out.values[j]);
  }
  return true;
}

double tail(const LegendreCoeffs& c) {
  return std::abs(c[kGaussOrder - 2]) + std::abs(c[kGaussOrder - 1]);
}

// Relative evaluation noise of a coefficient like 1/(σ−t) when t itself is
// rounded: ulp(σ)/(σ−t). Near a nonzero finite endpoint this dominates the
// Legendre tail and no amount of subdivision removes it.
double evaluation_noise(const EndpointMap& map, double a, double b) {
  const Interval& I = map.interval();
  double cond = 0.0;
  for (double x : {a, b}) {
    if (I.lower().finite() && I.tau() != 0.0) {
      cond = std::max(cond, std::abs(I.tau()) / map.lower_gap(x));
    }
    if (I.upper().finite() && I.sigma() != 0.0) {
      cond = std::max(cond, std::abs(I.sigma()) / map.upper_gap(x));
    }
  }
  return 2.3e-16 * cond;
}

bool resolved(const EndpointMap& map, const Panel& p,
              const std::vector<IntegrandSpec>& gs, const LayoutOptions& opt) {
  const double hw = 0.5 * (p.b - p.a);
  const double rel = opt.rel_tol + 16.0 * evaluation_noise(map, p.a, p.b);
  for (std::size_t j = 0; j < gs.size(); ++j) {
    double scale = 0.0;
    for (const auto& v : p.values[j]) scale = std::max(scale, std::abs(v));
    if (tail(p.coeffs[j]) > rel * scale + opt.abs_tol) return false;
    if (gs[j].exponent &&
        std::abs(2.0 * hw * p.coeffs[j][0].real()) > opt.exponent_step) {
      return false;
    }
  }
  return true;
}

// Grows panels from x_ref toward `limit` (direction dir = ±1).
std::vector<Panel> grow(const EndpointMap& map, double x_ref, double limit,
                        int dir, const std::vector<IntegrandSpec>& gs,
                        const LayoutOptions& opt, StopReason& reason) {
  std::vector<Panel> out;
  std::vector<double> running(gs.size(), 0.0);
  double x = x_ref;
  double w = 0.125;
  reason = StopReason::kLimit;
  for (;;) {
    const double remaining = dir > 0 ? limit - x : x - limit;
    if (remaining <= 1e-13 * (1.0 + std::abs(x))) {
      reason = StopReason::kLimit;
      return out;
    }
    w = std::min({w, opt.max_width, remaining});
    const double a = dir > 0 ? x : x - w;
    const double b = dir > 0 ? x + w : x;
    Panel p;
    if (!sample_panel(map, gs, a, b, p) || !resolved(map, p, gs, opt)) {
      w *= 0.5;
      if (w < opt.min_width) {
        reason = StopReason::kResolution;
        return out;
      }
      continue;
    }
    bool over = false;
    for (std::size_t j = 0; j < gs.size(); ++j) {
      if (!gs[j].exponent) continue;
      const double step = 2.0 * 0.5 * (b - a) * p.coeffs[j][0].real();
      if (std::abs(running[j] + dir * step) > opt.exponent_budget) over = true;
    }
    if (over) {
      reason = StopReason::kExponentBudget;
      return out;
    }
    for (std::size_t j = 0; j < gs.size(); ++j) {
      running[j] += dir * (b - a) * p.coeffs[j][0].real();
    }
    out.push_back(std::move(p));
    x = dir > 0 ? b : a;
    w = std::min(2 * w, opt.max_width);
  }
}

void fill(const std::vector<LegendreCoeffs>& coeffs,
          const PanelLayout& layout, double x_anchor,
          std::vector<Complex>& start, std::vector<NodeValues>& nodes,
          double& error);

}  // namespace

CumulativeSet CumulativeSet::build(const EndpointMap& map, double x_ref,
                                   const std::vector<IntegrandSpec>& integrands,
                                   const LayoutOptions& opt) {
  if (x_ref < map.x_min() || x_ref > map.x_max()) {
    throw InvalidInput("reference point outside the analysis range");
  }
  StopReason lo_reason, hi_reason;
  std::vector<Panel> right =
      grow(map, x_ref, map.x_max(), +1, integrands, opt, hi_reason);
  std::vector<Panel> left =
      grow(map, x_ref, map.x_min(), -1, integrands, opt, lo_reason);
  if (left.empty() && right.empty()) {
    throw CoverageExceeded("integrands cannot be resolved near the reference point");
  }
  std::reverse(left.begin(), left.end());
  std::vector<Panel> panels;
  panels.reserve(left.size() + right.size());
  for (auto& p : left) panels.push_back(std::move(p));
  for (auto& p : right) panels.push_back(std::move(p));

  CumulativeSet set;
  set.layout_ = std::make_shared<PanelLayout>();
  PanelLayout& L = *set.layout_;
  L.map_ = map;
  L.x_ref_ = x_ref;
  L.lower_stop_ = lo_reason;
  L.upper_stop_ = hi_reason;
  L.breaks_.push_back(panels.front().a);
  for (const auto& p : panels) L.breaks_.push_back(p.b);

  for (std::size_t j = 0; j < integrands.size(); ++j) {
    std::vector<NodeValues> nv;
    nv.reserve(panels.size());
    for (const auto& p : panels) nv.push_back(p.values[j]);
    set.items_.push_back(CumulativeIntegral::from_nodes(set.layout_, nv, x_ref));
  }
  return set;
}

CumulativeIntegral CumulativeIntegral::from_nodes(
    std::shared_ptr<const PanelLayout> layout,
    const std::vector<std::array<Complex, kGaussOrder>>& node_values,
    double x_anchor) {
  CumulativeIntegral c;
  c.layout_ = std::move(layout);
  const PanelLayout& L = *c.layout_;
  const std::size_t n = L.panels();
  c.coeffs_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    c.coeffs_[k] = legendre_coefficients(node_values[k]);
  }
  fill(c.coeffs_, L, x_anchor, c.start_, c.nodes_, c.error_);
  return c;
}

namespace {

void fill(const std::vector<LegendreCoeffs>& coeffs, const PanelLayout& L,
          double x_anchor, std::vector<Complex>& start,
          std::vector<NodeValues>& nodes, double& error) {
  const std::size_t n = L.panels();
  start.assign(n + 1, Complex{});
  error = 0.0;
  // Accumulate from the left end, then shift so the anchor reads zero.
  for (std::size_t k = 0; k < n; ++k) {
    const double hw = L.half_width(k);
    start[k + 1] = start[k] + 2.0 * hw * coeffs[k][0];
    error += 2.0 * hw * tail(coeffs[k]);
  }
  const std::size_t ka = L.panel_of(x_anchor);
  const double xi = (x_anchor - L.center(ka)) / L.half_width(ka);
  const Complex shift =
      start[ka] + L.half_width(ka) * legendre_integral(coeffs[ka], xi);
  for (auto& s : start) s -= shift;
  nodes.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < kGaussOrder; ++i) {
      nodes[k][i] = start[k] + L.half_width(k) *
                                   legendre_integral(coeffs[k], gl_nodes()[i]);
    }
  }
  // Round-off of the running sum.
  double mag = 0.0;
  for (const auto& s : start) mag = std::max(mag, std::abs(s));
  error += 1e-15 * mag * static_cast<double>(n);
}

}  // namespace

Complex CumulativeIntegral::operator()(double x) const {
  const PanelLayout& L = *layout_;
  const double slack = 1e-12 * (1.0 + std::abs(x));
  if (x < L.x_lo() - slack || x > L.x_hi() + slack) {
    throw CoverageExceeded("point x=" + std::to_string(x) +
                           " is outside the cumulative coverage");
  }
  const std::size_t k = L.panel_of(x);
  const double xi = std::clamp((x - L.center(k)) / L.half_width(k), -1.0, 1.0);
  return start_[k] + L.half_width(k) * legendre_integral(coeffs_[k], xi);
}

Complex CumulativeIntegral::at_t(double t) const {
  return (*this)(layout_->map().x_of(t));
}

Complex CumulativeIntegral::density(double x) const {
  const PanelLayout& L = *layout_;
  const std::size_t k = L.panel_of(x);
  const double xi = std::clamp((x - L.center(k)) / L.half_width(k), -1.0, 1.0);
  return legendre_eval(coeffs_[k], xi);
}

CumulativeIntegral cumulative(const std::function<Complex(double)>& g,
                              double t_ref, const Interval& I,
                              const LayoutOptions& opt) {
  if (!I.contains(t_ref) || t_ref == I.tau() || t_ref == I.sigma()) {
    throw InvalidInput("t_ref must be interior to the interval");
  }
  const EndpointMap map(I);
  CumulativeSet set =
      CumulativeSet::build(map, map.x_of(t_ref), {{g, true, "g"}}, opt);
  return set[0];
}

}  // namespace ulamkit::quad
