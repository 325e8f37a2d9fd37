#include <algorithm>
#include <cmath>

#include "ulamkit/errors.hpp"
#include "ulamkit/stability.hpp"

namespace ulamkit {

namespace {

// A resolution stop this close to a finite endpoint is as good as reaching it.
bool stopped_short(const quad::PanelLayout& L, bool lower) {
  const auto reason = lower ? L.lower_stop() : L.upper_stop();
  if (reason != quad::StopReason::kResolution) return false;
  const Interval& I = L.map().interval();
  const Endpoint& e = lower ? I.lower() : I.upper();
  if (!e.finite()) return true;
  const double t = L.map().t(lower ? L.x_lo() : L.x_hi());
  return std::abs(t - e.value) > 1e-6 * std::max(1.0, std::abs(e.value));
}

double choose_t_ref(const OscillatorProblem& p, const RiccatiSolution& rho,
                    const AnalysisOptions& opt) {
  if (opt.t_ref) return *opt.t_ref;
  if (const auto* n = rho.numeric_solution()) return n->t0();
  return p.domain.reference_point();
}

}  // namespace

AnalysisContext::AnalysisContext(const OscillatorProblem& p,
                                 RiccatiSolution rho,
                                 const AnalysisOptions& opt)
    : problem_(p),
      rho_(std::move(rho)),
      opt_(opt),
      map_(p.domain),
      alpha_(p.alpha, p.params),
      beta_(p.beta, p.params),
      gamma_(p.gamma, p.params),
      forcing_(p.forcing, p.params) {
  const double t_ref = choose_t_ref(p, rho_, opt);
  const Interval& I = p.domain;
  if (!I.contains(t_ref) || t_ref == I.tau() || t_ref == I.sigma()) {
    throw InvalidInput("reference point must be interior to the domain");
  }
  const RiccatiSolution* r = &rho_;
  const expr::CompiledExpr* a = &alpha_;
  const expr::CompiledExpr* b = &beta_;
  std::vector<quad::IntegrandSpec> gs = {
      {[r](double t) { return (*r)(t); }, true, "rho"},
      {[r, a, b](double t) { return (*r)(t) + (*b)(t) / (*a)(t); }, true,
       "rho+beta/alpha"},
      {[a](double t) { return Complex(1.0 / std::abs((*a)(t)), 0.0); }, false,
       "1/|alpha|"},
  };
  set_ = quad::CumulativeSet::build(map_, map_.x_of(t_ref), gs, opt.layout);
  layout_ = set_.layout();
  reduced_lower_ = stopped_short(*layout_, true);
  reduced_upper_ = stopped_short(*layout_, false);
}

double AnalysisContext::a(double x) const {
  return 1.0 / std::abs(alpha_(map_.t(x)));
}

double AnalysisContext::cumulative_error() const {
  return std::max({set_[0].error_bound(), set_[1].error_bound(),
                   set_[2].error_bound()});
}

}  // namespace ulamkit
