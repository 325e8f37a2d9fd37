// Built-in problems with analytic targets.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ulamkit/model.hpp"
#include "ulamkit/stability.hpp"

namespace ulamkit {

struct CorpusEntry {
  std::string id;
  std::string description;
  OscillatorProblem problem;
  std::string rho;  // expression text
  Case expected_case = Case::kNone;
  Verdict expected_verdict = Verdict::kBestConstant;
  std::optional<double> target_B;  // analytic best constant
  std::string witness;             // instability witness (t, eps)
  // Constant-coefficient entries run on a truncated interval.
  bool constant_coefficient = false;
  Complex a0, a1, a2;
};

CorpusEntry example1();
CorpusEntry example2();
CorpusEntry example3(double sigma);
CorpusEntry example4(double sigma);
CorpusEntry example5();
CorpusEntry example6(double a, double b, double sigma);
CorpusEntry constant_entry(double a0, double a1, double a2);

/// The nine default entries: examples 1–6 (σ = 1, a = 1, b = 2) and the
/// constant-coefficient cases (1,3,2), (2,−2,−4), (1,−3,2).
std::vector<CorpusEntry> corpus();
/// Parameter sweeps of examples 3, 4 and 6.
std::vector<CorpusEntry> corpus_sweeps();

struct CorpusOutcome {
  std::string id;
  bool passed = false;
  Verdict verdict = Verdict::kInconclusive;
  Case selected = Case::kNone;
  std::optional<double> value;
  std::optional<double> target;
  double seconds = 0.0;
  std::string message;
};

/// Full pipeline with --best semantics; B within 1e-4 relative of the target
/// and the expected verdict.
CorpusOutcome run_entry(const CorpusEntry& e);
StabilityReport analyze_entry(const CorpusEntry& e, bool best = true);

}  // namespace ulamkit
