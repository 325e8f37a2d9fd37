// Boundedness functions f1..f4, Ulam constants L1..L3, best constants
// B1..B3, divergence certificates and case classification.
//
// Everything is evaluated on one panel layout shared by the cumulatives
//   R = ∫ Re ρ,  P = ∫ Re(ρ + β/α),  A = ∫ 1/|α|
// anchored at an interior reference point.
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ulamkit/model.hpp"
#include "ulamkit/quad.hpp"
#include "ulamkit/riccati.hpp"

namespace ulamkit {

struct DivergenceOptions {
  double threshold = 1e6;  // M; ∫ρ conditions use ln M
  std::size_t points = 24;
  std::size_t tail = 8;
  double cap = 1e200;
};

struct AnalysisOptions {
  quad::LayoutOptions layout;
  quad::SupOptions f_sup;                 // scans for f1..f4
  quad::SupOptions constant_sup{129, 5};  // outer sup of L / B
  DivergenceOptions divergence;
  double existence_share = 1e-3;
  double residual_tol = 1e-8;
  double reality_tol = 1e-12;
  std::optional<double> t_ref;  // cumulative anchor
  std::optional<double> t0;     // divergence anchor
};

class AnalysisContext {
 public:
  AnalysisContext(const OscillatorProblem& p, RiccatiSolution rho,
                  const AnalysisOptions& opt = {});
  // Weighted integrals keep pointers into the cumulatives.
  AnalysisContext(const AnalysisContext&) = delete;
  AnalysisContext& operator=(const AnalysisContext&) = delete;

  [[nodiscard]] const OscillatorProblem& problem() const { return problem_; }
  [[nodiscard]] const RiccatiSolution& rho() const { return rho_; }
  [[nodiscard]] const AnalysisOptions& options() const { return opt_; }
  [[nodiscard]] const quad::EndpointMap& map() const { return map_; }
  [[nodiscard]] std::shared_ptr<const quad::PanelLayout> layout() const {
    return layout_;
  }
  [[nodiscard]] double t_ref() const { return map_.t(layout_->x_ref()); }

  /// ∫_{t_ref}^t ρ and ∫_{t_ref}^t (ρ + β/α), complex.
  [[nodiscard]] const quad::CumulativeIntegral& R() const { return set_[0]; }
  [[nodiscard]] const quad::CumulativeIntegral& P() const { return set_[1]; }
  [[nodiscard]] const quad::CumulativeIntegral& A() const { return set_[2]; }
  [[nodiscard]] quad::Exponent R_exp(double sign = 1.0) const { return {&set_[0], sign}; }
  [[nodiscard]] quad::Exponent P_exp(double sign = 1.0) const { return {&set_[1], sign}; }

  /// 1/|α(t(x))|.
  [[nodiscard]] double a(double x) const;
  [[nodiscard]] Complex alpha(double t) const { return alpha_(t); }
  [[nodiscard]] Complex beta(double t) const { return beta_(t); }
  [[nodiscard]] Complex gamma(double t) const { return gamma_(t); }
  [[nodiscard]] Complex forcing(double t) const { return forcing_(t); }

  [[nodiscard]] double covered_lower() const { return map_.t(layout_->x_lo()); }
  [[nodiscard]] double covered_upper() const { return map_.t(layout_->x_hi()); }
  /// The layout stopped short of an endpoint because an integrand could not
  /// be resolved (a pole of ρ, a coverage limit of a numeric ρ, ...).
  [[nodiscard]] bool reduced_lower() const { return reduced_lower_; }
  [[nodiscard]] bool reduced_upper() const { return reduced_upper_; }
  [[nodiscard]] bool reduced() const { return reduced_lower_ || reduced_upper_; }
  [[nodiscard]] double cumulative_error() const;

 private:
  OscillatorProblem problem_;
  RiccatiSolution rho_;
  AnalysisOptions opt_;
  quad::EndpointMap map_;
  expr::CompiledExpr alpha_, beta_, gamma_, forcing_;
  quad::CumulativeSet set_;
  std::shared_ptr<const quad::PanelLayout> layout_;
  bool reduced_lower_ = false, reduced_upper_ = false;
};

/// f_which (1..4) as a running integral over the layout.
quad::ExpWeightedIntegral boundedness_function(const AnalysisContext& ctx,
                                               int which);
/// Existence and sup of f_which.
FSup f_sup(const AnalysisContext& ctx, int which);

struct CaseSelection {
  Case selected = Case::kNone;
  std::vector<int> required_f;  // e.g. {3, 4}
  /// Divergence sub-conditions, e.g. {"rho_integral_at_tau", "y_at_tau"}.
  std::vector<std::string> required_divergence;
  std::map<std::string, FSup> f_sups;
};

/// Required f's and divergence conditions of a case.
CaseSelection case_requirements(Case c);

/// Tries cases i, ii, iii in order; the first with finite required sups wins.
CaseSelection classify(const AnalysisContext& ctx);

struct ConstantResult {
  double value = 0.0;
  double error = 0.0;
  double attained_at = 0.0;
  std::map<std::string, FSup> f_sups;
};

/// L_case = sup over t of the nested integral. Throws HypothesisFailed when
/// a required f is divergent or unbounded.
ConstantResult ulam_constant(const AnalysisContext& ctx, Case c);

/// Running nested integral behind L_case (before the sup).
quad::ExpWeightedIntegral constant_kernel(const AnalysisContext& ctx, Case c,
                                          const quad::ExpWeightedIntegral& inner);

DivergenceEvidence check_divergence(const AnalysisContext& ctx,
                                    const std::string& condition);

struct BestConstantResult {
  double B = 0.0;
  double error = 0.0;
  double attained_at = 0.0;
  std::vector<DivergenceEvidence> divergence;
  [[nodiscard]] bool certified() const;
};

/// B_case. Throws RealityViolated for complex data or ρ, HypothesisFailed
/// as ulam_constant. Divergence evidence is attached, not enforced.
BestConstantResult best_constant(const AnalysisContext& ctx, Case c);

/// True when α, β, γ and ρ are real on the probe grid (within tol).
bool data_real(const AnalysisContext& ctx, double tol = 1e-12);

// ---------------------------------------------------------------------------
// Constant coefficients a0 x'' + a1 x' + a2 x = f.

struct ConstantCoefficientResult {
  CharacteristicRoots roots;
  std::optional<double> L;
  std::optional<double> B;
  Case selected = Case::kNone;
};

/// Closed-form constants. Throws DegenerateLeadingCoefficient when a0 = 0.
ConstantCoefficientResult constant_coefficients(Complex a0, Complex a1,
                                                Complex a2);

/// The truncated problem on (−T, T), T = 40/min|Re λ|, with ρ = λ2, used to
/// cross-check the closed form through quadrature.
struct TruncatedProblem {
  OscillatorProblem problem;
  expr::Expr rho;
  double T = 0.0;
};
TruncatedProblem constant_coefficient_problem(Complex a0, Complex a1,
                                              Complex a2);

// ---------------------------------------------------------------------------
// Full pipeline.

struct AnalyzeOptions {
  AnalysisOptions analysis;
  bool best = false;
  /// Run the instability probe when the theorems do not apply.
  bool probe = true;
  /// Witness expression in t and `eps` for the probe; empty = constant ε.
  std::string witness;
  double probe_epsilon = 1.0;
};

/// validate → Riccati residual → classify → L → (B, certificates) → verdict.
/// Throws InvalidInput when the problem is inadmissible.
StabilityReport analyze(const OscillatorProblem& p, const RiccatiSolution& rho,
                        const AnalyzeOptions& opt = {});

}  // namespace ulamkit
