// Riccati companion α(ρ′+ρ²) + βρ + γ = 0: validation of supplied
// solutions and numeric construction by an IVP solve.
#pragma once

#include <memory>
#include <optional>
#include <string>

#include "ulamkit/model.hpp"
#include "ulamkit/ode.hpp"

namespace ulamkit {

struct RiccatiIvpOptions {
  double rtol = 1e-12;
  double atol = 1e-14;
  /// Blow-up when |ρ| > blowup_scale·(1 + |ρ0|).
  double blowup_scale = 1e8;
  double min_step_rel = 1e-14;
  /// A stop this close (relative to the interval scale) to an open endpoint
  /// counts as reaching it.
  double endpoint_slack = 1e-6;
};

/// Dense ρ trajectory from a two-sided IVP solve.
class NumericSolution {
 public:
  [[nodiscard]] double t0() const { return t0_; }
  [[nodiscard]] double lower() const { return lower_; }
  [[nodiscard]] double upper() const { return upper_; }
  [[nodiscard]] bool covers(double t) const { return t >= lower_ && t <= upper_; }
  /// Blow-up (or step collapse) detected before reaching the endpoint.
  [[nodiscard]] bool lower_blowup() const { return lower_blowup_; }
  [[nodiscard]] bool upper_blowup() const { return upper_blowup_; }
  [[nodiscard]] const std::string& lower_status() const { return lower_status_; }
  [[nodiscard]] const std::string& upper_status() const { return upper_status_; }

  /// Throws CoverageExceeded outside [lower, upper].
  [[nodiscard]] Complex rho(double t) const;
  [[nodiscard]] Complex rho_prime(double t) const;

 private:
  friend NumericSolution solve_ivp(const OscillatorProblem&, double, Complex,
                                   const RiccatiIvpOptions&);
  double t0_ = 0.0;
  double lower_ = 0.0, upper_ = 0.0;
  bool lower_blowup_ = false, upper_blowup_ = false;
  std::string lower_status_, upper_status_;
  std::shared_ptr<const ode::DenseSolution> forward_, backward_;
};

/// A Riccati solution, either an expression or a numeric trajectory.
class RiccatiSolution {
 public:
  enum class Source { kAnalytic, kNumeric };

  static RiccatiSolution analytic(expr::Expr rho, const expr::Params& params);
  static RiccatiSolution numeric(NumericSolution sol);

  [[nodiscard]] Source source() const { return source_; }
  [[nodiscard]] std::string source_name() const {
    return source_ == Source::kAnalytic ? "analytic" : "numeric";
  }
  [[nodiscard]] Complex operator()(double t) const;
  [[nodiscard]] Complex derivative(double t) const;
  [[nodiscard]] const std::optional<expr::Expr>& expression() const { return expr_; }
  [[nodiscard]] const NumericSolution* numeric_solution() const {
    return numeric_ ? &*numeric_ : nullptr;
  }
  /// Range on which ρ is defined (the whole domain for expressions).
  [[nodiscard]] std::pair<double, double> coverage(const Interval& I) const;

  double residual_sup = 0.0;

 private:
  Source source_ = Source::kAnalytic;
  std::optional<expr::Expr> expr_;
  std::optional<expr::Expr> dexpr_;
  expr::CompiledExpr rho_, drho_;
  std::optional<NumericSolution> numeric_;
};

/// sup over the probe grid of |α(ρ′+ρ²)+βρ+γ| / (1 + |α|(|ρ′|+|ρ|²) + |β||ρ| + |γ|).
double residual_sup(const OscillatorProblem& p, const expr::Expr& rho);
/// Same for any solution; numeric ones are checked where they are defined.
double residual_sup(const OscillatorProblem& p, const RiccatiSolution& rho);

/// Integrates ρ′ = −(βρ+γ)/α − ρ² from (t0, ρ0) toward both endpoints.
NumericSolution solve_ivp(const OscillatorProblem& p, double t0, Complex rho0,
                          const RiccatiIvpOptions& opt = {});

}  // namespace ulamkit
