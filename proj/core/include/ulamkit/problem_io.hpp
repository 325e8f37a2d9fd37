// Problem files: a JSON document with expression strings for the
// coefficients, the interval, and optional ρ, parameters, tolerances and an
// instability witness.
#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "ulamkit/model.hpp"
#include "ulamkit/stability.hpp"

namespace ulamkit {

/// Optional overrides from the "tolerances" block.
struct Tolerances {
  std::optional<double> residual;         // Riccati residual acceptance
  std::optional<double> reality;          // |Im| treated as zero
  std::optional<double> existence_share;  // outer-share divergence test
  std::optional<double> divergence_threshold;
  std::optional<std::size_t> divergence_tail;
  std::optional<double> layout_rel_tol;

  void apply(AnalysisOptions& opt) const;
};

struct ProblemFile {
  OscillatorProblem problem;
  std::optional<std::string> rho;
  std::optional<std::string> witness;  // in t and eps
  Tolerances tolerances;
};

/// Parses and checks a problem document. Throws InvalidInput on structural
/// errors, SyntaxError / UnknownFunction on malformed expressions.
ProblemFile parse_problem(std::string_view json_text,
                          std::string default_name = "problem");
ProblemFile load_problem(const std::string& path);

/// Canonical JSON text of a problem file (expressions kept verbatim).
std::string to_json(const ProblemFile& f);

}  // namespace ulamkit
