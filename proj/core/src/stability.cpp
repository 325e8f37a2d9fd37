#include "ulamkit/stability.hpp"

#include <algorithm>
#include <cmath>

#include "ulamkit/dynamics.hpp"
#include "ulamkit/errors.hpp"

namespace ulamkit {

using quad::Direction;
using quad::ExpWeightedIntegral;

ExpWeightedIntegral boundedness_function(const AnalysisContext& ctx,
                                         int which) {
  auto one = [](double) { return 1.0; };
  auto a = [&ctx](double x) { return ctx.a(x); };
  const double share = ctx.options().existence_share;
  switch (which) {
    case 1:
      return {ctx.layout(), Direction::kBackward, a, ctx.P_exp(+1), share};
    case 2:
      return {ctx.layout(), Direction::kBackward, one, ctx.R_exp(-1), share};
    case 3:
      return {ctx.layout(), Direction::kForward, one, ctx.R_exp(+1), share};
    case 4:
      return {ctx.layout(), Direction::kForward, a, ctx.P_exp(-1), share};
    default:
      throw InvalidInput("boundedness functions are numbered 1..4");
  }
}

namespace {

FSup sup_of(const AnalysisContext& ctx, const ExpWeightedIntegral& W,
            const quad::SupOptions& opt) {
  FSup out;
  if (W.divergent()) {
    out.status = FSup::Status::kDivergent;
    out.note = "outermost unit carries share " + std::to_string(W.outer_share());
    return out;
  }
  const auto& L = *ctx.layout();
  const quad::SupResult s = quad::sup_over_x(
      [&W](double x) { return W(x); }, ctx.map(), L.x_lo(), L.x_hi(), opt);
  if (s.unbounded) {
    out.status = FSup::Status::kUnbounded;
    out.value = kInf;
    out.attained_at = s.attained_t;
    out.note = "increasing toward " + s.attained_tag;
    return out;
  }
  out.status = FSup::Status::kFinite;
  out.value = s.sup_value;
  out.error = s.error + W.error_bound();
  out.attained_at = s.attained_t;
  return out;
}

std::string f_name(int which) { return "f" + std::to_string(which); }

}  // namespace

FSup f_sup(const AnalysisContext& ctx, int which) {
  return sup_of(ctx, boundedness_function(ctx, which), ctx.options().f_sup);
}

CaseSelection case_requirements(Case c) {
  CaseSelection s;
  s.selected = c;
  switch (c) {
    case Case::kI:
      s.required_f = {1, 2};
      s.required_divergence = {"rho_integral_at_sigma", "y_at_sigma"};
      break;
    case Case::kII:
      s.required_f = {1, 3};
      s.required_divergence = {"rho_integral_at_tau", "y_at_sigma"};
      break;
    case Case::kIII:
      s.required_f = {3, 4};
      s.required_divergence = {"rho_integral_at_tau", "y_at_tau"};
      break;
    case Case::kNone:
      break;
  }
  return s;
}

CaseSelection classify(const AnalysisContext& ctx) {
  std::map<std::string, FSup> sups;
  auto get = [&](int w) -> const FSup& {
    auto it = sups.find(f_name(w));
    if (it == sups.end()) it = sups.emplace(f_name(w), f_sup(ctx, w)).first;
    return it->second;
  };
  for (Case c : {Case::kI, Case::kII, Case::kIII}) {
    CaseSelection s = case_requirements(c);
    const bool ok = std::all_of(s.required_f.begin(), s.required_f.end(), [&](int w) {
      return get(w).status == FSup::Status::kFinite;
    });
    if (ok) {
      s.f_sups = sups;
      return s;
    }
  }
  CaseSelection none;
  none.f_sups = sups;
  return none;
}

ExpWeightedIntegral constant_kernel(const AnalysisContext& ctx, Case c,
                                    const ExpWeightedIntegral& inner) {
  auto h = [&inner](double x) { return inner(x); };
  const double share = ctx.options().existence_share;
  switch (c) {
    case Case::kI:
      return {ctx.layout(), Direction::kBackward, h, ctx.R_exp(-1), share};
    case Case::kII:
    case Case::kIII:
      return {ctx.layout(), Direction::kForward, h, ctx.R_exp(+1), share};
    case Case::kNone:
      break;
  }
  throw InvalidInput("no constant for case none");
}

ConstantResult ulam_constant(const AnalysisContext& ctx, Case c) {
  if (c == Case::kNone) throw InvalidInput("no constant for case none");
  const CaseSelection req = case_requirements(c);
  ConstantResult out;
  for (int w : req.required_f) {
    FSup s = f_sup(ctx, w);
    out.f_sups[f_name(w)] = s;
    if (s.status != FSup::Status::kFinite) {
      throw HypothesisFailed(f_name(w) + " is " + to_string(s.status), w);
    }
  }
  const ExpWeightedIntegral inner =
      boundedness_function(ctx, c == Case::kIII ? 4 : 1);
  const ExpWeightedIntegral K = constant_kernel(ctx, c, inner);
  const auto& L = *ctx.layout();
  const quad::SupResult s =
      quad::sup_over_x([&K](double x) { return K(x); }, ctx.map(), L.x_lo(),
                       L.x_hi(), ctx.options().constant_sup);
  if (s.unbounded || K.divergent()) {
    throw HypothesisFailed("nested kernel is unbounded", 0);
  }
  out.value = s.sup_value;
  // Inner error propagates through a kernel of total weight ≤ sup f_b.
  double weight = 0.0;
  for (const auto& [name, fs] : out.f_sups) weight = std::max(weight, fs.value);
  out.error = s.error + K.error_bound() + inner.error_bound() * weight;
  out.attained_at = s.attained_t;
  return out;
}

namespace {

double default_t0(const AnalysisContext& ctx) {
  if (ctx.options().t0) return *ctx.options().t0;
  const Interval& I = ctx.problem().domain;
  if (I.lower().finite() && I.upper().finite()) return 0.5 * (I.tau() + I.sigma());
  return I.reference_point();
}

// y(t) = ∫_{t0}^t e^{R(t) − R(s) − (P(s) − P(t0))} ds, real parts, with a
// max-shift so neither factor overflows on its own.
double y_value(const AnalysisContext& ctx, double x0, double x, double cap) {
  const auto& L = *ctx.layout();
  const double Rt = ctx.R().re(x);
  const double P0 = ctx.P().re(x0);
  auto phi = [&](double s) { return Rt - ctx.R().re(s) - ctx.P().re(s) + P0; };
  const double lo = std::min(x0, x), hi = std::max(x0, x);
  double m = std::max(phi(lo), phi(hi));
  for (double b : L.breakpoints()) {
    if (b > lo && b < hi) m = std::max(m, phi(b));
  }
  const double I = quad::panel_quadrature(
      L, [&](double s) { return std::exp(phi(s) - m) * ctx.map().dt_dx(s); }, x0, x);
  if (I == 0.0) return 0.0;
  const double logv = m + std::log(std::abs(I));
  if (logv > std::log(cap)) return std::copysign(cap, I);
  return std::copysign(std::exp(logv), I);
}

}  // namespace

DivergenceEvidence check_divergence(const AnalysisContext& ctx,
                                    const std::string& condition) {
  const DivergenceOptions& opt = ctx.options().divergence;
  DivergenceEvidence ev;
  ev.condition = condition;
  const bool at_sigma = condition.size() > 6 &&
                        condition.compare(condition.size() - 5, 5, "sigma") == 0;
  const bool is_rho = condition.rfind("rho_integral", 0) == 0;
  if (!is_rho && condition.rfind("y_at", 0) != 0) {
    throw InvalidInput("unknown divergence condition " + condition);
  }
  ev.endpoint = at_sigma ? "sigma" : "tau";
  // Case iii needs y → −∞ at τ; every other condition tends to +∞.
  const bool minus = !is_rho && !at_sigma;
  ev.limit = minus ? "-inf" : "+inf";
  ev.t0 = default_t0(ctx);
  ev.threshold = is_rho ? std::log(opt.threshold) : opt.threshold;

  const auto& L = *ctx.layout();
  const double x0 = ctx.map().x_of(ev.t0);
  if (!L.covers(x0)) return ev;
  const double x_end = at_sigma ? L.x_hi() : L.x_lo();
  const double sign = minus ? -1.0 : 1.0;
  std::vector<double> adjusted;
  for (std::size_t k = 1; k <= opt.points; ++k) {
    const double x = x0 + (x_end - x0) * static_cast<double>(k) /
                              static_cast<double>(opt.points);
    double v;
    if (is_rho) {
      v = std::clamp(ctx.R().re(x) - ctx.R().re(x0), -opt.cap, opt.cap);
    } else {
      v = y_value(ctx, x0, x, opt.cap);
    }
    ev.trace.emplace_back(ctx.map().t(x), v);
    adjusted.push_back(sign * v);
  }
  ev.threshold_crossed = !adjusted.empty() && adjusted.back() >= ev.threshold;
  const std::size_t k = std::min(opt.tail, adjusted.size());
  bool mono = k >= 2;
  for (std::size_t i = adjusted.size() - k + 1; i < adjusted.size(); ++i) {
    mono = mono && adjusted[i] > adjusted[i - 1];
  }
  // Values pinned at the cap still count as increasing.
  if (!mono && adjusted.size() >= k && adjusted.back() >= opt.cap) {
    mono = true;
    for (std::size_t i = adjusted.size() - k + 1; i < adjusted.size(); ++i) {
      mono = mono && adjusted[i] >= adjusted[i - 1];
    }
  }
  ev.monotone_tail = mono;
  return ev;
}

bool BestConstantResult::certified() const {
  return !divergence.empty() &&
         std::all_of(divergence.begin(), divergence.end(),
                     [](const DivergenceEvidence& d) { return d.holds(); });
}

bool data_real(const AnalysisContext& ctx, double tol) {
  if (!coefficients_real(ctx.problem(), tol)) return false;
  const auto [lo, hi] = ctx.rho().coverage(ctx.problem().domain);
  for (double t : probe_grid(ctx.problem().domain)) {
    if (t < lo || t > hi) continue;
    Complex r;
    try {
      r = ctx.rho()(t);
    } catch (const Error&) {
      continue;
    }
    if (std::abs(r.imag()) > tol * std::max(1.0, std::abs(r.real()))) return false;
  }
  return true;
}

BestConstantResult best_constant(const AnalysisContext& ctx, Case c) {
  if (!data_real(ctx, ctx.options().reality_tol)) {
    throw RealityViolated("best constants need real coefficients and a real rho");
  }
  // With real data the kernels of B and L coincide.
  const ConstantResult L = ulam_constant(ctx, c);
  BestConstantResult out;
  out.B = L.value;
  out.error = L.error;
  out.attained_at = L.attained_at;
  for (const auto& cond : case_requirements(c).required_divergence) {
    out.divergence.push_back(check_divergence(ctx, cond));
  }
  return out;
}

// ---------------------------------------------------------------------------

StabilityReport analyze(const OscillatorProblem& p, const RiccatiSolution& rho,
                        const AnalyzeOptions& opt) {
  StabilityReport rep;
  rep.problem = p.name;
  const auto violations = validate_problem(p);
  if (!violations.empty()) {
    const auto& v = violations.front();
    throw InvalidInput(v.what + " (t=" + std::to_string(v.t) + ")");
  }
  rep.rho_source = rho.source_name();
  rep.residual_sup = residual_sup(p, rho);
  const bool rho_valid = rep.residual_sup <= opt.analysis.residual_tol;
  if (!rho_valid) {
    rep.notes.push_back("rho residual " + std::to_string(rep.residual_sup) +
                        " exceeds tolerance; theorems not applied");
  } else {
    const AnalysisContext ctx(p, rho, opt.analysis);
    rep.reduced_domain = ctx.reduced();
    rep.covered_lower = ctx.covered_lower();
    rep.covered_upper = ctx.covered_upper();
    rep.cumulative_error = ctx.cumulative_error();
    rep.panels = ctx.layout()->panels();
    rep.sup_scan_points = opt.analysis.f_sup.scan_points;
    for (int w = 1; w <= 4; ++w) {
      try {
        rep.f_sups[f_name(w)] = f_sup(ctx, w);
      } catch (const Error& e) {
        FSup s;
        s.note = e.what();
        rep.f_sups[f_name(w)] = s;
      }
    }
    if (rep.reduced_domain) {
      rep.notes.push_back("rho could not be resolved on all of the domain "
                          "(covered " + std::to_string(rep.covered_lower) +
                          " .. " + std::to_string(rep.covered_upper) + ")");
    } else {
      for (Case c : {Case::kI, Case::kII, Case::kIII}) {
        const auto req = case_requirements(c).required_f;
        if (std::all_of(req.begin(), req.end(), [&](int w) {
              return rep.f_sups[f_name(w)].status == FSup::Status::kFinite;
            })) {
          rep.selected = c;
          break;
        }
      }
    }
    if (rep.selected != Case::kNone) {
      const ConstantResult L = ulam_constant(ctx, rep.selected);
      rep.constant.kind = ConstantValue::Kind::kL;
      rep.constant.L = L.value;
      rep.constant.L_error = L.error;
      rep.verdict = Verdict::kStableWithConstant;
      if (opt.best) {
        try {
          const BestConstantResult B = best_constant(ctx, rep.selected);
          rep.divergence = B.divergence;
          if (B.certified()) {
            rep.constant.kind = ConstantValue::Kind::kB;
            rep.constant.B = B.B;
            rep.constant.B_error = B.error;
            rep.verdict = Verdict::kBestConstant;
          } else {
            rep.notes.push_back("divergence not evidenced; L is an Ulam constant "
                                "but not certified minimal");
          }
        } catch (const RealityViolated& e) {
          rep.notes.push_back(e.what());
        }
      }
    }
  }
  if (rep.verdict == Verdict::kInconclusive && opt.probe) {
    ProbeOptions po;
    po.epsilon = opt.probe_epsilon;
    po.witness = opt.witness;
    rep.instability = instability_probe(p, po);
    if (rep.instability->evidenced) rep.verdict = Verdict::kInstabilityEvidence;
  }
  return rep;
}

}  // namespace ulamkit
