// Solution representation through ρ, the two-parameter homogeneous family,
// and empirical Ulam experiments: extremal and random perturbations, the
// nearest-solution search and the instability probe.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ulamkit/stability.hpp"

namespace ulamkit {

struct IvpData {
  double t0 = 0.0;
  Complex x0{};
  Complex x0p{};
};

/// Coefficients of w(t) = (d2 + d1·∫_{t0}^t e^{−∫_{t0}^s (2ρ+β/α)}) e^{∫_{t0}^t ρ}.
struct SolutionFamilyParams {
  double d1 = 0.0;
  double d2 = 0.0;
};

/// x(t) = (c + K(t))·e^{R(t) − R(t_a)} with K a cumulative on the analysis
/// layout. Self-contained: it outlives the context that built it.
class Trajectory {
 public:
  /// Throws CoverageExceeded outside the layout's coverage.
  [[nodiscard]] Complex operator()(double t) const;
  /// Same, in the map coordinate (no round trip through t).
  [[nodiscard]] Complex at_x(double x) const;
  [[nodiscard]] double lower() const;
  [[nodiscard]] double upper() const;

 private:
  friend Trajectory make_trajectory(const AnalysisContext&, Complex,
                                    quad::CumulativeIntegral, double);
  quad::EndpointMap map_;
  quad::CumulativeIntegral R_;
  quad::CumulativeIntegral K_;
  Complex c_{};
  Complex r_anchor_{};
};

Trajectory make_trajectory(const AnalysisContext& ctx, Complex c,
                           quad::CumulativeIntegral K, double x_anchor);

/// Solution of α x″ + β x′ + γ x = f (+ extra) with x(t0) = x0, x′(t0) = x0′,
/// through the reduction-of-order formula on the cached cumulatives.
Trajectory solve_representation(
    const AnalysisContext& ctx, const IvpData& ivp,
    const std::function<Complex(double t)>& extra_forcing = nullptr);

/// Member of the homogeneous family anchored at t0 (default: t_ref).
Trajectory homogeneous_member(const AnalysisContext& ctx,
                              const SolutionFamilyParams& params,
                              std::optional<double> t0 = std::nullopt);

struct PerturbationExperiment {
  double epsilon = 0.0;
  std::string perturbation;  // "extremal", "extremal(-)", "random", "witness"
  double sup_distance = 0.0;
  double ratio = 0.0;
  double attained_at = 0.0;
  std::vector<std::pair<double, double>> trace;  // (t, |ξ − x|)
};

/// |ξ − x| for the designated pair of a case under forcing perturbation g:
/// the nested kernel solved as an ODE pair from the case's anchor end.
/// Returns r(t) on a dense grid through a callable.
struct KernelSolution {
  std::function<double(double x)> abs_r;  // |r| in the map coordinate
  std::function<double(double x)> r;      // signed r (real part)
  double x_lo = 0.0, x_hi = 0.0;
};
KernelSolution solve_kernel(const AnalysisContext& ctx, Case c,
                            const std::function<double(double t)>& g);

/// ξ = q + p with g ≡ ±ε against the designated solution of the case.
PerturbationExperiment extremal_experiment(const AnalysisContext& ctx, Case c,
                                           double epsilon, double sign = 1.0);

/// The closed-form witness pair ξ ≡ ε, x = ε(1 − t/2) for
/// t(1−t)x″ + (2−t)x′ + x = 0 on (0,1).
PerturbationExperiment first_example_witness(double epsilon);

struct NearestSolution {
  SolutionFamilyParams params;
  double sup_distance = 0.0;
  double attained_at = 0.0;
  std::size_t evaluations = 0;
};

/// Minimises sup_t |r(t) − w(t)| over the homogeneous family (Nelder–Mead,
/// 9 starts on a 3×3 grid around the least-squares fit; the origin is
/// always a candidate).
NearestSolution nearest_solution(const std::function<double(double t)>& r,
                                 const AnalysisContext& ctx);

/// Smooth random perturbation g(t) = ε·s(θ)/max|s|: s is a degree-4
/// Fourier series with N(0,1)/k coefficients in θ = (tanh(x/4)+1)/2, x the
/// map coordinate of t. Certified sup|g| ≤ ε.
class RandomPerturbation {
 public:
  RandomPerturbation(const quad::EndpointMap& map, std::uint64_t seed,
                     std::uint64_t trial, double epsilon, int degree = 4);
  [[nodiscard]] double operator()(double t) const { return at_x(map_.x_of(t)); }
  [[nodiscard]] double at_x(double x) const;
  [[nodiscard]] double certified_sup() const { return sup_; }

 private:
  [[nodiscard]] double raw(double theta) const;
  quad::EndpointMap map_;
  std::vector<double> a_, b_;
  double c0_ = 0.0;
  double scale_ = 1.0;
  double sup_ = 0.0;
};

struct RandomTestResult {
  double max_ratio = 0.0;
  std::vector<double> ratios;
  std::vector<NearestSolution> nearest;
};

/// Draws `trials` perturbations, measures the distance from ξ to the
/// nearest solution, and throws RatioExceedsConstant when a ratio exceeds
/// bound·(1 + 2e-2). Trials run concurrently; results are independent of
/// scheduling.
RandomTestResult random_perturbation_test(const AnalysisContext& ctx, Case c,
                                          double epsilon, std::size_t trials,
                                          std::uint64_t seed, double bound);

struct ProbeOptions {
  double epsilon = 1.0;
  /// Witness ξ in t and `eps`; empty: the response to constant forcing ε.
  std::string witness;
  std::vector<double> scales{10.0, 100.0, 1000.0};
  std::size_t grid = 8001;
  double growth_threshold = 10.0;
};

/// Residual check of the witness and the growth of its distance to the
/// solution set over truncations of the domain.
InstabilityTrace instability_probe(const OscillatorProblem& p,
                                   const ProbeOptions& opt = {});

}  // namespace ulamkit
