// Report emission: JSON mirror of a StabilityReport with provenance and
// optional experiment blocks, and fixed-order CSV traces.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ulamkit/dynamics.hpp"
#include "ulamkit/model.hpp"

namespace ulamkit {

inline constexpr const char* kVersion = "0.1.0";

struct Provenance {
  std::string tool_version = kVersion;
  std::string config_hash;            // 16 hex digits
  std::optional<double> wall_time_s;  // omitted in reproducible mode
};

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view data);
std::string hex64(std::uint64_t v);

struct EmpiricalBlock {
  std::optional<PerturbationExperiment> extremal;
  std::optional<PerturbationExperiment> witness;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::optional<RandomTestResult> random;
  double bound = 0.0;
  std::optional<std::string> failure;  // set when a ratio exceeded the bound
};

/// Pretty-printed JSON report. Object keys are sorted so that equal inputs
/// give byte-identical output.
std::string report_json(const StabilityReport& r, const Provenance& prov,
                        const EmpiricalBlock* empirical = nullptr);

/// "t,value[,error]" with a header line.
std::string trace_csv(const std::vector<std::pair<double, double>>& trace,
                      const std::vector<double>* errors = nullptr);

/// Machine-readable error object for stderr.
std::string error_json(const std::string& kind, const std::string& message);

}  // namespace ulamkit
