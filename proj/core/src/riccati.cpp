#include "ulamkit/riccati.hpp"

#include <algorithm>
#include <cmath>

#include "ulamkit/errors.hpp"
#include "ulamkit/quad.hpp"

namespace ulamkit {

Complex NumericSolution::rho(double t) const {
  if (!covers(t)) {
    throw CoverageExceeded("t=" + std::to_string(t) +
                           " is outside the numeric Riccati coverage");
  }
  const auto& d = t >= t0_ ? *forward_ : *backward_;
  return {d.component(t, 0), d.component(t, 1)};
}

Complex NumericSolution::rho_prime(double t) const {
  if (!covers(t)) {
    throw CoverageExceeded("t=" + std::to_string(t) +
                           " is outside the numeric Riccati coverage");
  }
  const auto& d = t >= t0_ ? *forward_ : *backward_;
  const ode::State dy = d.derivative(t);
  return {dy[0], dy[1]};
}

RiccatiSolution RiccatiSolution::analytic(expr::Expr rho,
                                          const expr::Params& params) {
  RiccatiSolution s;
  s.source_ = Source::kAnalytic;
  s.rho_ = expr::CompiledExpr(rho, params);
  if (rho.differentiable()) {
    s.dexpr_ = expr::differentiate(rho);
    s.drho_ = expr::CompiledExpr(*s.dexpr_, params);
  }
  s.expr_ = std::move(rho);
  return s;
}

RiccatiSolution RiccatiSolution::numeric(NumericSolution sol) {
  RiccatiSolution s;
  s.source_ = Source::kNumeric;
  s.numeric_ = std::move(sol);
  return s;
}

Complex RiccatiSolution::operator()(double t) const {
  if (numeric_) return numeric_->rho(t);
  return rho_(t);
}

Complex RiccatiSolution::derivative(double t) const {
  if (numeric_) return numeric_->rho_prime(t);
  if (!dexpr_) throw NotDifferentiable("rho contains abs, re or im");
  return drho_(t);
}

std::pair<double, double> RiccatiSolution::coverage(const Interval& I) const {
  if (numeric_) return {numeric_->lower(), numeric_->upper()};
  return {I.tau(), I.sigma()};
}

namespace {

double relative_residual(Complex a, Complex b, Complex c, Complex rho,
                         Complex drho) {
  // Scaled by the size of the terms that must cancel, so that a ρ growing
  // like 1/t toward a singular end is judged by relative accuracy.
  const Complex r = a * (drho + rho * rho) + b * rho + c;
  const double scale = 1.0 + std::abs(a) * (std::abs(drho) + std::norm(rho)) +
                       std::abs(b) * std::abs(rho) + std::abs(c);
  return std::abs(r) / scale;
}

}  // namespace

double residual_sup(const OscillatorProblem& p, const RiccatiSolution& rho) {
  const expr::CompiledExpr a(p.alpha, p.params), b(p.beta, p.params),
      c(p.gamma, p.params);
  const auto [lo, hi] = rho.coverage(p.domain);
  double sup = 0.0;
  for (double t : probe_grid(p.domain)) {
    if (t < lo || t > hi) continue;
    Complex av, bv, cv, r, dr;
    try {
      av = a(t);
      bv = b(t);
      cv = c(t);
      r = rho(t);
      dr = rho.derivative(t);
    } catch (const DomainError&) {
      continue;  // a pole of ρ sitting exactly on a probe point
    }
    const double v = relative_residual(av, bv, cv, r, dr);
    if (std::isnan(v)) continue;
    sup = std::max(sup, v);
  }
  return sup;
}

double residual_sup(const OscillatorProblem& p, const expr::Expr& rho) {
  if (!rho.differentiable()) {
    throw NotDifferentiable("rho contains abs, re or im");
  }
  return residual_sup(p, RiccatiSolution::analytic(rho, p.params));
}

NumericSolution solve_ivp(const OscillatorProblem& p, double t0, Complex rho0,
                          const RiccatiIvpOptions& opt) {
  const Interval& I = p.domain;
  if (!I.contains(t0) || t0 == I.tau() || t0 == I.sigma()) {
    throw InvalidInput("t0 must be interior to the domain");
  }
  const expr::CompiledExpr a(p.alpha, p.params), b(p.beta, p.params),
      c(p.gamma, p.params);
  if (std::abs(a(t0)) == 0.0) throw InvalidInput("alpha vanishes at t0");

  ode::Rhs rhs = [&](double t, const ode::State& y, ode::State& dy) {
    const Complex r(y[0], y[1]);
    const Complex av = a(t);
    const Complex d = -(b(t) * r + c(t)) / av - r * r;
    dy[0] = d.real();
    dy[1] = d.imag();
  };

  const quad::EndpointMap map(I);
  const double t_hi = map.t(map.x_max());
  const double t_lo = map.t(map.x_min());

  ode::Options o;
  o.rtol = opt.rtol;
  o.atol = opt.atol;
  o.blowup = opt.blowup_scale * (1.0 + std::abs(rho0));
  o.min_step_rel = opt.min_step_rel;
  o.max_steps = 2000000;

  const ode::State y0{rho0.real(), rho0.imag()};
  ode::Result fwd = ode::dopri5(rhs, t0, t_hi, y0, o);
  ode::Result bwd = ode::dopri5(rhs, t0, t_lo, y0, o);

  auto reached = [&](const ode::Result& r, const Endpoint& e) {
    if (r.status == ode::Status::kCompleted) return true;
    if (!e.finite()) return false;
    const double scale = std::max({1.0, std::abs(e.value)});
    return std::abs(r.t_last - e.value) <= opt.endpoint_slack * scale;
  };

  NumericSolution s;
  s.t0_ = t0;
  s.upper_ = fwd.t_last;
  s.lower_ = bwd.t_last;
  s.upper_blowup_ = !reached(fwd, I.upper());
  s.lower_blowup_ = !reached(bwd, I.lower());
  s.upper_status_ = ode::to_string(fwd.status);
  s.lower_status_ = ode::to_string(bwd.status);
  s.forward_ = std::make_shared<const ode::DenseSolution>(std::move(fwd.dense));
  s.backward_ = std::make_shared<const ode::DenseSolution>(std::move(bwd.dense));
  return s;
}

}  // namespace ulamkit
