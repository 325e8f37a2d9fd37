#include <algorithm>
#include <cmath>

#include "ulamkit/quad.hpp"

namespace ulamkit::quad {

namespace {

// Closest approach to a finite endpoint e: relative 1e-7 (t itself carries
// only ~16 digits, so a coefficient like 1/(1−t) is already 1e-9-accurate
// there), and never closer than e^{-32} of the interval scale.
double min_gap(double endpoint, double scale) {
  return std::max(scale * std::exp(-32.0), 1e-7 * std::abs(endpoint));
}

constexpr double kFar = 1e8;    // analysis reach toward infinity
constexpr double kProbeFar = 1e4;
constexpr double kProbeGap = 1e-4;
constexpr double kProbeX = 5.0;  // finite intervals: |x| ≤ 5
constexpr double kLineX = 19.0;

}  // namespace

EndpointMap::EndpointMap(const Interval& I) : interval_(I) {
  const bool lo = I.lower().finite();
  const bool hi = I.upper().finite();
  const double tau = I.tau();
  const double sigma = I.sigma();
  if (lo && hi) {
    kind_ = Kind::kFinite;
    c_ = 0.5 * (tau + sigma);
    h_ = 0.5 * (sigma - tau);
    x_min_ = x_for_lower_gap(min_gap(tau, 2 * h_));
    x_max_ = x_for_upper_gap(min_gap(sigma, 2 * h_));
    probe_min_ = std::max(x_min_, -kProbeX);
    probe_max_ = std::min(x_max_, kProbeX);
  } else if (lo) {
    kind_ = Kind::kLowerFinite;
    x_min_ = std::log(min_gap(tau, 1.0));
    x_max_ = std::log(kFar + std::abs(tau));
    probe_min_ = std::max(x_min_, std::log(kProbeGap));
    probe_max_ = std::log(std::max(kProbeFar - tau, 10.0));
  } else if (hi) {
    kind_ = Kind::kUpperFinite;
    x_min_ = -std::log(kFar + std::abs(sigma));
    x_max_ = -std::log(min_gap(sigma, 1.0));
    probe_min_ = -std::log(std::max(kProbeFar + sigma, 10.0));
    probe_max_ = std::min(x_max_, -std::log(kProbeGap));
  } else {
    kind_ = Kind::kLine;
    x_min_ = -kLineX;
    x_max_ = kLineX;
    probe_max_ = std::asinh(kProbeFar);
    probe_min_ = -probe_max_;
  }
}

double EndpointMap::x_for_lower_gap(double gap) const {
  // gap = 2h / (1 + e^{-2x})
  return -0.5 * std::log(2 * h_ / gap - 1.0);
}

double EndpointMap::x_for_upper_gap(double gap) const {
  // gap = 2h / (1 + e^{2x})
  return 0.5 * std::log(2 * h_ / gap - 1.0);
}

double EndpointMap::lower_gap(double x) const {
  switch (kind_) {
    case Kind::kFinite: return 2 * h_ / (1.0 + std::exp(-2 * x));
    case Kind::kLowerFinite: return std::exp(x);
    default: return kInf;
  }
}

double EndpointMap::upper_gap(double x) const {
  switch (kind_) {
    case Kind::kFinite: return 2 * h_ / (1.0 + std::exp(2 * x));
    case Kind::kUpperFinite: return std::exp(-x);
    default: return kInf;
  }
}

double EndpointMap::t(double x) const {
  switch (kind_) {
    case Kind::kFinite:
      return x < 0 ? interval_.tau() + lower_gap(x)
                   : interval_.sigma() - upper_gap(x);
    case Kind::kLowerFinite: return interval_.tau() + std::exp(x);
    case Kind::kUpperFinite: return interval_.sigma() - std::exp(-x);
    case Kind::kLine: return std::sinh(x);
  }
  return 0.0;
}

double EndpointMap::dt_dx(double x) const {
  switch (kind_) {
    case Kind::kFinite: {
      const double e = std::exp(-2 * std::abs(x));
      return 4 * h_ * e / ((1 + e) * (1 + e));
    }
    case Kind::kLowerFinite: return std::exp(x);
    case Kind::kUpperFinite: return std::exp(-x);
    case Kind::kLine: return std::cosh(x);
  }
  return 0.0;
}

double EndpointMap::x_of(double t) const {
  switch (kind_) {
    case Kind::kFinite:
      return 0.5 * std::log((t - interval_.tau()) / (interval_.sigma() - t));
    case Kind::kLowerFinite: return std::log(t - interval_.tau());
    case Kind::kUpperFinite: return -std::log(interval_.sigma() - t);
    case Kind::kLine: return std::asinh(t);
  }
  return 0.0;
}

}  // namespace ulamkit::quad
