#include "ulamkit/model.hpp"

#include <cmath>
#include <cstdio>
#include <set>

#include "ulamkit/errors.hpp"
#include "ulamkit/quad.hpp"

namespace ulamkit {

Interval::Interval(Endpoint lower, Endpoint upper)
    : lower_(lower), upper_(upper) {
  if (std::isnan(lower.value) || std::isnan(upper.value)) {
    throw InvalidInput("interval endpoint is NaN");
  }
  if (!(lower.value < upper.value)) {
    throw InvalidInput("interval requires lower < upper");
  }
  if ((!lower.finite() && lower.included) ||
      (!upper.finite() && upper.included)) {
    throw InvalidInput("an infinite endpoint cannot be included");
  }
  if (lower.value == kInf || upper.value == -kInf) {
    throw InvalidInput("interval has no interior points");
  }
}

bool Interval::contains(double t) const {
  const bool above = lower_.included ? t >= lower_.value : t > lower_.value;
  const bool below = upper_.included ? t <= upper_.value : t < upper_.value;
  return above && below;
}

double Interval::reference_point() const {
  if (lower_.finite() && upper_.finite()) {
    return 0.5 * (lower_.value + upper_.value);
  }
  if (lower_.finite()) return lower_.value + 1.0;
  if (upper_.finite()) return upper_.value - 1.0;
  return 0.0;
}

std::string Interval::to_string() const {
  auto num = [](double v) {
    if (v == kInf) return std::string("inf");
    if (v == -kInf) return std::string("-inf");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  return std::string(lower_.included ? "[" : "(") + num(lower_.value) + ", " +
         num(upper_.value) + (upper_.included ? "]" : ")");
}

OscillatorProblem OscillatorProblem::from_strings(
    std::string name, std::string_view alpha, std::string_view beta,
    std::string_view gamma, std::string_view forcing, Interval domain,
    expr::Params params) {
  OscillatorProblem p;
  p.name = std::move(name);
  p.alpha = expr::parse(alpha);
  p.beta = expr::parse(beta);
  p.gamma = expr::parse(gamma);
  p.forcing = expr::parse(forcing);
  p.alpha_text = std::string(alpha);
  p.beta_text = std::string(beta);
  p.gamma_text = std::string(gamma);
  p.forcing_text = std::string(forcing);
  p.domain = domain;
  p.params = std::move(params);
  return p;
}

std::vector<double> probe_grid(const Interval& I, std::size_t n) {
  const quad::EndpointMap map(I);
  const double a = map.probe_min();
  const double b = map.probe_max();
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = a + (b - a) * static_cast<double>(i) /
                             static_cast<double>(n > 1 ? n - 1 : 1);
    out.push_back(map.t(x));
  }
  return out;
}

namespace {

double bisect_sign_change(const expr::CompiledExpr& alpha, double lo,
                          double hi) {
  double flo = alpha(lo).real();
  for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    double fm = 0.0;
    try {
      fm = alpha(mid).real();
    } catch (const Error&) {
      return mid;
    }
    if (fm == 0.0) return mid;
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<Violation> validate_problem(const OscillatorProblem& p) {
  std::vector<Violation> out;

  std::set<std::string> names;
  for (const auto* e : {&p.alpha, &p.beta, &p.gamma, &p.forcing}) {
    for (auto& n : e->parameters()) names.insert(n);
  }
  for (const auto& n : names) {
    if (p.params.find(n) == p.params.end()) {
      out.push_back({"parameter '" + n + "' is not bound", 0.0});
    }
  }
  if (!out.empty()) return out;

  const expr::CompiledExpr alpha(p.alpha, p.params);
  const expr::CompiledExpr beta(p.beta, p.params);
  const expr::CompiledExpr gamma(p.gamma, p.params);
  const expr::CompiledExpr forcing(p.forcing, p.params);
  const std::pair<const char*, const expr::CompiledExpr*> coeffs[] = {
      {"alpha", &alpha}, {"beta", &beta}, {"gamma", &gamma},
      {"forcing", &forcing}};

  const auto grid = probe_grid(p.domain);
  bool have_prev = false;
  double prev_t = 0.0;
  Complex prev_alpha;
  for (double t : grid) {
    bool ok = true;
    for (const auto& [label, c] : coeffs) {
      try {
        const Complex v = (*c)(t);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
          out.push_back({std::string(label) + " is not finite", t});
          ok = false;
        }
      } catch (const Error& e) {
        out.push_back({std::string(label) + ": " + e.what(), t});
        ok = false;
      }
    }
    if (!ok) {
      have_prev = false;
      continue;
    }
    const Complex a = alpha(t);
    if (a == Complex(0.0, 0.0)) {
      out.push_back({"alpha vanishes", t});
      have_prev = false;
      continue;
    }
    if (have_prev && std::abs(a.imag()) <= 1e-12 * std::abs(a) &&
        std::abs(prev_alpha.imag()) <= 1e-12 * std::abs(prev_alpha) &&
        (a.real() < 0) != (prev_alpha.real() < 0)) {
      out.push_back({"alpha changes sign", bisect_sign_change(alpha, prev_t, t)});
    }
    have_prev = true;
    prev_t = t;
    prev_alpha = a;
  }
  return out;
}

bool coefficients_real(const OscillatorProblem& p, double tol) {
  const expr::CompiledExpr cs[] = {
      {p.alpha, p.params}, {p.beta, p.params},
      {p.gamma, p.params}, {p.forcing, p.params}};
  for (double t : probe_grid(p.domain)) {
    for (const auto& c : cs) {
      if (std::abs(c(t).imag()) > tol) return false;
    }
  }
  return true;
}

std::string to_string(Case c) {
  switch (c) {
    case Case::kI: return "i";
    case Case::kII: return "ii";
    case Case::kIII: return "iii";
    case Case::kNone: return "none";
  }
  return "none";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kStableWithConstant: return "stable_with_constant";
    case Verdict::kBestConstant: return "best_constant";
    case Verdict::kInconclusive: return "inconclusive";
    case Verdict::kInstabilityEvidence: return "instability_evidence";
  }
  return "inconclusive";
}

std::string to_string(FSup::Status s) {
  switch (s) {
    case FSup::Status::kFinite: return "finite";
    case FSup::Status::kUnbounded: return "unbounded";
    case FSup::Status::kDivergent: return "divergent";
    case FSup::Status::kNotComputed: return "not_computed";
  }
  return "not_computed";
}

}  // namespace ulamkit
