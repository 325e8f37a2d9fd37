// Domain objects shared by every module: intervals, problems, characteristic
// roots and the analysis report.
#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ulamkit/expr.hpp"

namespace ulamkit {

using Complex = std::complex<double>;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Endpoint {
  double value = 0.0;  // may be ±inf
  bool included = false;

  [[nodiscard]] bool finite() const { return std::isfinite(value); }
};

/// The domain I with lower endpoint τ and upper endpoint σ, τ < σ.
class Interval {
 public:
  Interval() = default;
  /// Throws InvalidInput when τ ≥ σ, an endpoint is NaN, or an infinite
  /// endpoint is marked included.
  Interval(Endpoint lower, Endpoint upper);

  static Interval open(double lo, double hi) { return {{lo, false}, {hi, false}}; }

  [[nodiscard]] const Endpoint& lower() const { return lower_; }
  [[nodiscard]] const Endpoint& upper() const { return upper_; }
  [[nodiscard]] double tau() const { return lower_.value; }
  [[nodiscard]] double sigma() const { return upper_.value; }
  [[nodiscard]] bool contains(double t) const;
  /// Deterministic interior reference point: midpoint for finite intervals,
  /// τ+1 / σ−1 for half-lines, 0 for the real line.
  [[nodiscard]] double reference_point() const;
  [[nodiscard]] std::string to_string() const;

 private:
  Endpoint lower_{-kInf, false};
  Endpoint upper_{kInf, false};
};

struct OscillatorProblem {
  std::string name;
  expr::Expr alpha;
  expr::Expr beta;
  expr::Expr gamma;
  expr::Expr forcing;
  Interval domain;
  expr::Params params;

  // Text forms as supplied; kept so reports and files round-trip verbatim.
  std::string alpha_text, beta_text, gamma_text, forcing_text;

  /// Builds a problem from expression strings. Throws SyntaxError /
  /// UnknownFunction on malformed text.
  static OscillatorProblem from_strings(std::string name, std::string_view alpha,
                                        std::string_view beta,
                                        std::string_view gamma,
                                        std::string_view forcing,
                                        Interval domain,
                                        expr::Params params = {});
};

struct Violation {
  std::string what;
  double t = 0.0;
};

/// 1024 interior points, uniform in the endpoint-map coordinate, so they
/// crowd geometrically toward singular or infinite endpoints.
std::vector<double> probe_grid(const Interval& I, std::size_t n = 1024);

/// Checks α ≠ 0 (no sign change, no zero) on the probe grid, that every
/// coefficient evaluates to a finite value there, and that all parameters
/// are bound. Returns an empty list when the problem is admissible.
std::vector<Violation> validate_problem(const OscillatorProblem& p);

/// True when every coefficient has |Im| ≤ tol on the probe grid.
bool coefficients_real(const OscillatorProblem& p, double tol = 1e-12);

struct CharacteristicRoots {
  Complex a0, a1, a2;
  Complex lambda1, lambda2;  // Re λ₁ ≥ Re λ₂
};

enum class Case { kI, kII, kIII, kNone };
std::string to_string(Case c);

enum class Verdict {
  kStableWithConstant,
  kBestConstant,
  kInconclusive,
  kInstabilityEvidence,
};
std::string to_string(Verdict v);

/// Sup of a boundedness function: a value, unbounded evidence, or a
/// divergent defining integral.
struct FSup {
  enum class Status { kFinite, kUnbounded, kDivergent, kNotComputed };
  Status status = Status::kNotComputed;
  double value = 0.0;
  double error = 0.0;
  double attained_at = 0.0;
  std::string note;
};
std::string to_string(FSup::Status s);

struct DivergenceEvidence {
  std::string condition;  // e.g. "rho_integral_at_tau"
  std::string limit;      // "+inf" or "-inf"
  std::string endpoint;   // "tau" or "sigma"
  double t0 = 0.0;
  double threshold = 0.0;
  std::vector<std::pair<double, double>> trace;
  bool threshold_crossed = false;
  bool monotone_tail = false;
  [[nodiscard]] bool holds() const { return threshold_crossed && monotone_tail; }
};

struct ConstantValue {
  enum class Kind { kNone, kL, kB };
  Kind kind = Kind::kNone;
  double L = 0.0;
  double L_error = 0.0;
  std::optional<double> B;
  double B_error = 0.0;
};

struct InstabilityTrace {
  std::string witness;
  double witness_residual_sup = 0.0;
  std::vector<std::pair<double, double>> growth;  // (truncation, distance)
  double growth_factor = 0.0;
  /// False when some distance sits below the cancellation floor of its fit
  /// (an exponentially growing basis); such traces are never evidence.
  bool resolved = true;
  bool evidenced = false;
};

struct StabilityReport {
  std::string problem;
  Case selected = Case::kNone;
  std::map<std::string, FSup> f_sups;  // keys f1..f4
  std::vector<DivergenceEvidence> divergence;
  ConstantValue constant;
  Verdict verdict = Verdict::kInconclusive;
  std::optional<InstabilityTrace> instability;

  // Diagnostics.
  std::string rho_source;
  double residual_sup = 0.0;
  bool reduced_domain = false;
  double covered_lower = 0.0;
  double covered_upper = 0.0;
  double cumulative_error = 0.0;
  std::size_t panels = 0;
  std::size_t sup_scan_points = 0;
  std::vector<std::string> notes;
};

}  // namespace ulamkit
