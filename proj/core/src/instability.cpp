// Instability probe. Works on the equation directly, without ρ: a witness ξ
// with |αξ″ + βξ′ + γξ − f| ≤ ε is compared against the full solution set
// x = p + c1·y1 + c2·y2 on growing truncations of the domain. A distance
// that keeps growing is evidence that no Ulam constant exists.

#include <algorithm>
#include <cmath>

#include "nelder_mead.hpp"
#include "ulamkit/dynamics.hpp"
#include "ulamkit/errors.hpp"
#include "ulamkit/ode.hpp"

namespace ulamkit {

namespace {

struct Window {
  double scale, lo, hi;
};

std::vector<Window> windows(const Interval& I, double t_ref,
                            const std::vector<double>& scales) {
  const bool lo_inf = !I.lower().finite(), hi_inf = !I.upper().finite();
  const bool both_finite = !lo_inf && !hi_inf;
  std::vector<Window> out;
  for (double s : scales) {
    Window w{s, 0.0, 0.0};
    if (lo_inf) {
      w.lo = -s;
    } else if (both_finite) {
      w.lo = I.tau() + (t_ref - I.tau()) / s;
    } else {
      w.lo = I.tau() + 0.1 * (t_ref - I.tau());
    }
    if (hi_inf) {
      w.hi = s;
    } else if (both_finite) {
      w.hi = I.sigma() - (I.sigma() - t_ref) / s;
    } else {
      w.hi = I.sigma() - 0.1 * (I.sigma() - t_ref);
    }
    if (w.lo < t_ref && t_ref < w.hi) out.push_back(w);
  }
  return out;
}

}  // namespace

InstabilityTrace instability_probe(const OscillatorProblem& p,
                                   const ProbeOptions& opt) {
  if (!(opt.epsilon > 0.0)) throw InvalidInput("epsilon must be positive");
  const double eps = opt.epsilon;
  const Interval& I = p.domain;
  const double t_ref = I.reference_point();
  const std::vector<Window> ws = windows(I, t_ref, opt.scales);
  InstabilityTrace out;
  if (ws.empty()) return out;
  double lo_all = t_ref, hi_all = t_ref;
  for (const Window& w : ws) {
    lo_all = std::min(lo_all, w.lo);
    hi_all = std::max(hi_all, w.hi);
  }

  const expr::CompiledExpr alpha(p.alpha, p.params), beta(p.beta, p.params),
      gamma(p.gamma, p.params), forcing(p.forcing, p.params);

  // Witness: an explicit expression, or q solving the equation with forcing
  // f + ε from zero data at t_ref (residual exactly ε).
  expr::Params wp = p.params;
  wp["eps"] = eps;
  std::optional<expr::CompiledExpr> W, W1;
  if (!opt.witness.empty()) {
    const expr::Expr w = expr::parse(opt.witness);
    const expr::Expr w1 = expr::differentiate(w);
    const expr::Expr w2 = expr::differentiate(w1);
    W.emplace(w, wp);
    W1.emplace(w1, wp);
    const expr::CompiledExpr W2(w2, wp);
    out.witness = opt.witness;
    const quad::EndpointMap map(I);
    auto res = [&](double x) {
      const double t = map.t(x);
      const Complex r = alpha(t) * W2(t) + beta(t) * (*W1)(t) +
                        gamma(t) * (*W)(t) - forcing(t);
      return std::abs(r);
    };
    quad::SupOptions so;
    so.divergence_threshold = kInf;
    out.witness_residual_sup =
        quad::sup_over_x(res, map, map.x_of(lo_all), map.x_of(hi_all), so).sup_value;
  } else {
    out.witness = "response to constant forcing eps";
    out.witness_residual_sup = eps;
  }

  // y1, y2 (data (1,0), (0,1)), p (forcing f), q (forcing f + ε), in t.
  ode::Rhs rhs = [&](double t, const ode::State& y, ode::State& dy) {
    const double a = alpha(t).real(), b = beta(t).real(), g = gamma(t).real();
    const double f = forcing(t).real();
    dy.resize(8);
    for (int k = 0; k < 4; ++k) {
      const double rhs_f = k < 2 ? 0.0 : (k == 2 ? f : f + eps);
      dy[2 * k] = y[2 * k + 1];
      dy[2 * k + 1] = (rhs_f - b * y[2 * k + 1] - g * y[2 * k]) / a;
    }
  };
  ode::Options o;
  o.rtol = 1e-11;
  o.atol = 1e-13;
  o.max_steps = 2000000;
  o.blowup = 1e150;
  const ode::State y0 = {1, 0, 0, 1, 0, 0, 0, 0};
  const ode::Result up = ode::dopri5(rhs, t_ref, hi_all, y0, o);
  const ode::Result down = ode::dopri5(rhs, t_ref, lo_all, y0, o);
  auto state = [&](double t, std::size_t i) {
    return t >= t_ref ? up.dense.component(t, i) : down.dense.component(t, i);
  };
  const double reach_hi = up.status == ode::Status::kCompleted ? hi_all : up.t_last;
  const double reach_lo = down.status == ode::Status::kCompleted ? lo_all : down.t_last;

  for (const Window& w : ws) {
    if (w.hi > reach_hi || w.lo < reach_lo) break;
    std::vector<double> d(opt.grid), u(opt.grid), v(opt.grid);
    for (std::size_t k = 0; k < opt.grid; ++k) {
      const double t = w.lo + (w.hi - w.lo) * static_cast<double>(k) /
                                  static_cast<double>(opt.grid - 1);
      const double xi = W ? (*W)(t).real() : state(t, 6);
      d[k] = xi - state(t, 4);
      u[k] = state(t, 0);
      v[k] = state(t, 2);
    }
    const detail::MinimaxFit fit = detail::minimax_fit(d, u, v);
    out.growth.emplace_back(w.scale, fit.value);
    // The distance is a difference of terms of size `mag`; below a millionth
    // of that it is round-off, not a measurement.
    double mag = 0.0;
    for (std::size_t k = 0; k < opt.grid; ++k) {
      mag = std::max({mag, std::abs(d[k]), std::abs(fit.c1 * u[k]),
                      std::abs(fit.c2 * v[k])});
    }
    if (fit.value < 1e-6 * mag) out.resolved = false;
  }
  if (out.growth.size() >= 2 && out.growth.front().second > 0.0) {
    out.growth_factor = out.growth.back().second / out.growth.front().second;
  }
  out.evidenced = out.growth.size() >= 2 && out.resolved &&
                  out.growth_factor >= opt.growth_threshold &&
                  out.witness_residual_sup <= eps * (1.0 + 1e-6);
  return out;
}

}  // namespace ulamkit
