// Integration machinery: endpoint transforms, standalone adaptive
// quadrature, cached cumulative antiderivatives on a shared panel layout,
// exponentially weighted running integrals, and sup search.
//
// Everything past `integrate` works in a map coordinate x with t = t(x),
// chosen per interval shape so that 1/t-type singularities and infinite
// ends become smooth, slowly varying integrands in x:
//
//   (τ,σ) finite   t = c + h·tanh x
//   (τ,∞)          t = τ + eˣ
//   (−∞,σ)         t = σ − e⁻ˣ
//   (−∞,∞)         t = sinh x
#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ulamkit/model.hpp"

namespace ulamkit::quad {

class EndpointMap {
 public:
  enum class Kind { kFinite, kLowerFinite, kUpperFinite, kLine };

  EndpointMap() = default;
  explicit EndpointMap(const Interval& I);

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] const Interval& interval() const { return interval_; }

  [[nodiscard]] double t(double x) const;
  [[nodiscard]] double dt_dx(double x) const;
  [[nodiscard]] double x_of(double t) const;
  /// t − τ and σ − t, computed without cancellation.
  [[nodiscard]] double lower_gap(double x) const;
  [[nodiscard]] double upper_gap(double x) const;

  // Analysis limits: as close to each endpoint as double precision in t
  // allows (relative gap 1e-7 at a nonzero endpoint), or t ≈ ±1e8.
  [[nodiscard]] double x_min() const { return x_min_; }
  [[nodiscard]] double x_max() const { return x_max_; }
  // Narrower range used for probe grids and residual checks.
  [[nodiscard]] double probe_min() const { return probe_min_; }
  [[nodiscard]] double probe_max() const { return probe_max_; }

 private:
  double x_for_lower_gap(double gap) const;
  double x_for_upper_gap(double gap) const;

  Interval interval_;
  Kind kind_ = Kind::kLine;
  double c_ = 0.0;  // midpoint (finite)
  double h_ = 1.0;  // half-width (finite)
  double x_min_ = 0.0, x_max_ = 0.0;
  double probe_min_ = 0.0, probe_max_ = 0.0;
};

// 16-point Gauss–Legendre rule on [-1, 1].
inline constexpr std::size_t kGaussOrder = 16;
const std::array<double, kGaussOrder>& gl_nodes();
const std::array<double, kGaussOrder>& gl_weights();

// Legendre machinery for the per-panel interpolants.
using LegendreCoeffs = std::array<Complex, kGaussOrder>;
LegendreCoeffs legendre_coefficients(const std::array<Complex, kGaussOrder>& v);
Complex legendre_eval(const LegendreCoeffs& c, double xi);
/// ∫_{-1}^{xi} of the series.
Complex legendre_integral(const LegendreCoeffs& c, double xi);

// ---------------------------------------------------------------------------
// Standalone integration.

struct QuadOptions {
  double tol = 1e-9;        // absolute
  double rel_tol = 1e-12;   // relative, whichever is looser
  std::size_t max_intervals = 4000;
  int max_levels = 12;      // tanh-sinh halvings
  double max_window = 64;   // widest u-window for infinite ranges
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
};

/// ∫_a^b g. a, b may be infinite. Adaptive Gauss–Kronrod 15 on proper
/// ranges; tanh-sinh when g cannot be evaluated at a finite endpoint;
/// s = a + eᵘ (mirrored) on infinite ranges. Throws Divergent when the
/// partial estimates grow without bound, MaxDepthExceeded when the error
/// target is not met.
QuadResult integrate(const std::function<double(double)>& g, double a, double b,
                     const QuadOptions& opt = {});

// ---------------------------------------------------------------------------
// Panel layout and cumulative integrals.

struct LayoutOptions {
  double rel_tol = 1e-11;
  double abs_tol = 1e-15;
  double max_width = 0.5;
  double min_width = 1e-9;
  double exponent_step = 2.0;    // max |Re ∫| per panel for exponents
  double exponent_budget = 700;  // stop when |Re ∫| from x_ref exceeds this
};

enum class StopReason { kLimit, kExponentBudget, kResolution };
std::string to_string(StopReason r);

/// An integrand of t. `exponent` integrands are used inside e^{…}, which
/// adds the per-panel step and overflow-budget checks.
struct IntegrandSpec {
  std::function<Complex(double t)> g;
  bool exponent = false;
  std::string name;
};

class PanelLayout {
 public:
  [[nodiscard]] const EndpointMap& map() const { return map_; }
  [[nodiscard]] double x_ref() const { return x_ref_; }
  [[nodiscard]] double x_lo() const { return breaks_.front(); }
  [[nodiscard]] double x_hi() const { return breaks_.back(); }
  [[nodiscard]] std::size_t panels() const { return breaks_.size() - 1; }
  [[nodiscard]] const std::vector<double>& breakpoints() const { return breaks_; }
  [[nodiscard]] double node(std::size_t panel, std::size_t i) const;
  [[nodiscard]] double center(std::size_t k) const {
    return 0.5 * (breaks_[k] + breaks_[k + 1]);
  }
  [[nodiscard]] double half_width(std::size_t k) const {
    return 0.5 * (breaks_[k + 1] - breaks_[k]);
  }
  /// Index of the panel containing x (clamped to the covered range).
  [[nodiscard]] std::size_t panel_of(double x) const;
  [[nodiscard]] bool covers(double x) const {
    return x >= x_lo() && x <= x_hi();
  }
  [[nodiscard]] StopReason lower_stop() const { return lower_stop_; }
  [[nodiscard]] StopReason upper_stop() const { return upper_stop_; }

 private:
  friend class CumulativeSet;
  EndpointMap map_;
  double x_ref_ = 0.0;
  std::vector<double> breaks_;
  StopReason lower_stop_ = StopReason::kLimit;
  StopReason upper_stop_ = StopReason::kLimit;
};

/// P(x) = ∫_{x_ref}^{x} g(t(s)) t'(s) ds stored as per-panel Legendre
/// series; equivalently ∫_{t_ref}^{t} g.
class CumulativeIntegral {
 public:
  [[nodiscard]] Complex operator()(double x) const;
  [[nodiscard]] double re(double x) const { return (*this)(x).real(); }
  [[nodiscard]] Complex at_t(double t) const;
  /// Interpolated integrand in x (includes the Jacobian t'(x)).
  [[nodiscard]] Complex density(double x) const;
  [[nodiscard]] Complex at_break(std::size_t k) const { return start_[k]; }
  [[nodiscard]] Complex at_node(std::size_t k, std::size_t i) const {
    return nodes_[k][i];
  }
  [[nodiscard]] double error_bound() const { return error_; }
  [[nodiscard]] const PanelLayout& layout() const { return *layout_; }
  [[nodiscard]] std::shared_ptr<const PanelLayout> layout_ptr() const {
    return layout_;
  }
  [[nodiscard]] double t_ref() const { return layout_->map().t(layout_->x_ref()); }

  /// Builds the cumulative of already-tabulated node values on an existing
  /// layout (values include the Jacobian), anchored at x_anchor.
  static CumulativeIntegral from_nodes(
      std::shared_ptr<const PanelLayout> layout,
      const std::vector<std::array<Complex, kGaussOrder>>& node_values,
      double x_anchor);

 private:
  friend class CumulativeSet;
  std::shared_ptr<const PanelLayout> layout_;
  std::vector<LegendreCoeffs> coeffs_;
  std::vector<Complex> start_;  // value at each breakpoint (size panels+1)
  std::vector<std::array<Complex, kGaussOrder>> nodes_;
  double error_ = 0.0;
};

/// Several cumulatives built together on one adaptively chosen layout.
class CumulativeSet {
 public:
  static CumulativeSet build(const EndpointMap& map, double x_ref,
                             const std::vector<IntegrandSpec>& integrands,
                             const LayoutOptions& opt = {});
  [[nodiscard]] const CumulativeIntegral& operator[](std::size_t i) const {
    return items_[i];
  }
  [[nodiscard]] std::size_t size() const { return items_.size(); }
  [[nodiscard]] std::shared_ptr<const PanelLayout> layout() const { return layout_; }

 private:
  std::shared_ptr<PanelLayout> layout_;
  std::vector<CumulativeIntegral> items_;
};

/// Convenience: cumulative of one integrand g over I, anchored at t_ref.
CumulativeIntegral cumulative(const std::function<Complex(double)>& g,
                              double t_ref, const Interval& I,
                              const LayoutOptions& opt = {});

/// Real exponent view sign·Re P(x) over a cumulative.
struct Exponent {
  const CumulativeIntegral* c = nullptr;
  double sign = 1.0;
  [[nodiscard]] double operator()(double x) const { return sign * c->re(x); }
  [[nodiscard]] double at_break(std::size_t k) const {
    return sign * c->at_break(k).real();
  }
  [[nodiscard]] double at_node(std::size_t k, std::size_t i) const {
    return sign * c->at_node(k, i).real();
  }
};

enum class Direction {
  kForward,   // V(t) = ∫_τ^t h(s) e^{E(t)−E(s)} ds
  kBackward,  // W(t) = ∫_t^σ h(s) e^{E(s)−E(t)} ds
};

/// A running integral with an exponential kernel, evaluated by a stable
/// panel recursion so that no exponential is ever formed on its own.
class ExpWeightedIntegral {
 public:
  /// h is a function of x (not including the Jacobian).
  ExpWeightedIntegral(std::shared_ptr<const PanelLayout> layout,
                      Direction dir, std::function<double(double x)> h,
                      Exponent E, double existence_share = 1e-3);

  [[nodiscard]] double operator()(double x) const;
  [[nodiscard]] double at_t(double t) const;
  /// True when the outermost unit of x carries more than the configured
  /// share of the integral at x_ref: the improper integral diverges.
  [[nodiscard]] bool divergent() const { return divergent_; }
  [[nodiscard]] double outer_share() const { return outer_share_; }
  [[nodiscard]] double error_bound() const { return error_; }
  [[nodiscard]] Direction direction() const { return dir_; }
  [[nodiscard]] const PanelLayout& layout() const { return *layout_; }
  /// Running values at the panel breakpoints.
  [[nodiscard]] const std::vector<double>& break_values() const { return acc_; }

 private:
  std::shared_ptr<const PanelLayout> layout_;
  Direction dir_;
  Exponent E_;
  std::vector<std::array<double, kGaussOrder>> h_nodes_;
  std::vector<LegendreCoeffs> h_coeffs_;
  std::vector<double> acc_;
  bool divergent_ = false;
  double outer_share_ = 0.0;
  double error_ = 0.0;
};

/// ∫ over [xa, xb] of F(x) dx by panel-aligned Gauss–Legendre.
double panel_quadrature(const PanelLayout& layout,
                        const std::function<double(double x)>& F, double xa,
                        double xb);

// ---------------------------------------------------------------------------
// Sup search.

struct SupOptions {
  std::size_t scan_points = 257;
  std::size_t refine_top = 5;
  double x_tol = 1e-10;
  double divergence_threshold = 1e6;
  std::size_t tail = 8;
  /// Aitken-extrapolate a monotone approach to an end of the range. Off for
  /// functions only known on the range itself.
  bool extrapolate = true;
};

struct SupResult {
  double sup_value = 0.0;
  bool unbounded = false;
  double attained_t = 0.0;
  std::string attained_tag;  // "interior", "tau", "sigma"
  double error = 0.0;
  std::vector<std::pair<double, double>> trace;  // (t, h)
};

/// Sup of h(x) over [x_lo, x_hi] of the map coordinate.
SupResult sup_over_x(const std::function<double(double x)>& h,
                     const EndpointMap& map, double x_lo, double x_hi,
                     const SupOptions& opt = {});

/// Sup of h(t) over I. Closed endpoints are sampled directly; open ones
/// through the limit of the transformed scan.
SupResult sup_over(const std::function<double(double t)>& h, const Interval& I,
                   const SupOptions& opt = {});

}  // namespace ulamkit::quad
