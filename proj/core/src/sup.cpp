#include <algorithm>
#include <cmath>
#include <numeric>

#include "ulamkit/errors.hpp"
#include "ulamkit/quad.hpp"

namespace ulamkit::quad {

namespace {

double safe_eval(const std::function<double(double)>& h, double x) {
  try {
    return h(x);
  } catch (const Error&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

// Golden-section maximisation of h on [a, b].
std::pair<double, double> golden_max(const std::function<double(double)>& h,
                                     double a, double b, double x_tol) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - r * (b - a);
  double d = a + r * (b - a);
  double fc = safe_eval(h, c);
  double fd = safe_eval(h, d);
  for (int it = 0; it < 200 && b - a > x_tol; ++it) {
    if (fc >= fd || std::isnan(fd)) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = safe_eval(h, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = safe_eval(h, d);
    }
  }
  return fc >= fd ? std::make_pair(c, fc) : std::make_pair(d, fd);
}

// Aitken Δ² on three samples approaching an endpoint; returns false when the
// samples do not look like a geometric approach to a limit.
bool aitken(double v0, double v1, double v2, double& limit) {
  const double d1 = v1 - v0;
  const double d2 = v2 - v1;
  const double den = d2 - d1;
  if (d1 == 0.0 || d2 == 0.0 || den == 0.0) return false;
  if ((d1 > 0) != (d2 > 0) || std::abs(d2) >= std::abs(d1)) return false;
  const double L = v2 - d2 * d2 / den;
  if (!std::isfinite(L) || std::abs(L - v2) > 10 * std::abs(d2)) return false;
  limit = L;
  return true;
}

bool better(double v, double t, double best_v, double best_t) {
  if (v > best_v) return true;
  return v == best_v && t < best_t;
}

}  // namespace

SupResult sup_over_x(const std::function<double(double x)>& h,
                     const EndpointMap& map, double x_lo, double x_hi,
                     const SupOptions& opt) {
  SupResult res;
  const std::size_t n = std::max<std::size_t>(opt.scan_points, 3);
  std::vector<double> xs(n), vs(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = x_lo + (x_hi - x_lo) * static_cast<double>(i) /
                       static_cast<double>(n - 1);
    vs[i] = safe_eval(h, xs[i]);
    res.trace.emplace_back(map.t(xs[i]), vs[i]);
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (std::isinf(vs[i]) && vs[i] > 0) {
      res.unbounded = true;
      res.sup_value = kInf;
      res.attained_t = map.t(xs[i]);
      res.attained_tag = "interior";
      return res;
    }
  }

  // Rising tails crossing the threshold are evidence of an unbounded sup.
  const std::size_t k = std::min(opt.tail, n - 1);
  auto rising = [&](bool upper) {
    for (std::size_t j = 0; j + 1 < k; ++j) {
      const double a = upper ? vs[n - k + j] : vs[k - 1 - j];
      const double b = upper ? vs[n - k + j + 1] : vs[k - 2 - j];
      if (!(b > a)) return false;
    }
    return true;
  };
  if (rising(true) && vs[n - 1] >= opt.divergence_threshold) {
    res.unbounded = true;
    res.sup_value = kInf;
    res.attained_t = map.t(xs[n - 1]);
    res.attained_tag = "sigma";
    return res;
  }
  if (rising(false) && vs[0] >= opt.divergence_threshold) {
    res.unbounded = true;
    res.sup_value = kInf;
    res.attained_t = map.t(xs[0]);
    res.attained_tag = "tau";
    return res;
  }

  std::size_t best = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::isnan(vs[i])) continue;
    if (best == n || vs[i] > vs[best]) best = i;
  }
  if (best == n) {
    throw InvalidInput("function could not be evaluated anywhere on the scan");
  }
  double best_x = xs[best];
  double best_v = vs[best];
  double best_t = map.t(best_x);
  std::string tag = "interior";

  // Golden-section refinement around the largest interior local maxima.
  std::vector<std::size_t> peaks;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (std::isnan(vs[i])) continue;
    const bool left_ok = std::isnan(vs[i - 1]) || vs[i] >= vs[i - 1];
    const bool right_ok = std::isnan(vs[i + 1]) || vs[i] >= vs[i + 1];
    if (left_ok && right_ok) peaks.push_back(i);
  }
  std::stable_sort(peaks.begin(), peaks.end(),
                   [&](std::size_t a, std::size_t b) { return vs[a] > vs[b]; });
  if (peaks.size() > opt.refine_top) peaks.resize(opt.refine_top);
  for (std::size_t i : peaks) {
    auto [x, v] = golden_max(h, xs[i - 1], xs[i + 1], opt.x_tol);
    if (std::isnan(v)) continue;
    const double t = map.t(x);
    if (better(v, t, best_v, best_t)) {
      best_x = x;
      best_v = v;
      best_t = t;
    }
  }

  // Limits at open ends.
  const double delta = std::min(1.0, (x_hi - x_lo) / 16.0);
  auto endpoint_limit = [&](bool upper) {
    const double s = upper ? -1.0 : 1.0;
    const double x0 = upper ? x_hi : x_lo;
    const double v2 = upper ? vs[n - 1] : vs[0];
    const double v1 = safe_eval(h, x0 + s * delta);
    const double v0 = safe_eval(h, x0 + 2 * s * delta);
    double L = v2;
    if (opt.extrapolate && std::isfinite(v0) && std::isfinite(v1) &&
        std::isfinite(v2) && aitken(v0, v1, v2, L)) {
      return std::make_pair(L, std::abs(L - v2));
    }
    return std::make_pair(v2, 0.0);
  };
  if (!std::isnan(vs[n - 1]) && vs[n - 1] >= best_v - 1e-12 * std::abs(best_v)) {
    auto [L, err] = endpoint_limit(true);
    if (better(L, map.t(x_hi), best_v, best_t)) {
      best_v = L;
      best_t = map.t(x_hi);
      tag = "sigma";
      res.error = err;
    }
  }
  if (!std::isnan(vs[0]) && vs[0] >= best_v - 1e-12 * std::abs(best_v)) {
    auto [L, err] = endpoint_limit(false);
    if (better(L, map.t(x_lo), best_v, best_t)) {
      best_v = L;
      best_t = map.t(x_lo);
      tag = "tau";
      res.error = err;
    }
  }
  if (tag == "interior") {
    if (best_x == x_hi) tag = "sigma";
    if (best_x == x_lo) tag = "tau";
  }
  res.sup_value = best_v;
  res.attained_t = best_t;
  res.attained_tag = tag;
  return res;
}

SupResult sup_over(const std::function<double(double t)>& h, const Interval& I,
                   const SupOptions& opt) {
  const EndpointMap map(I);
  SupResult res = sup_over_x([&](double x) { return h(map.t(x)); }, map,
                             map.x_min(), map.x_max(), opt);
  if (res.unbounded) return res;
  auto closed = [&](double t, const char* tag) {
    const double v = safe_eval(h, t);
    res.trace.emplace_back(t, v);
    if (std::isnan(v)) return;
    if (v > res.sup_value || (v == res.sup_value && t < res.attained_t)) {
      res.sup_value = v;
      res.attained_t = t;
      res.attained_tag = tag;
      res.error = 0.0;
    }
  };
  if (I.lower().included) closed(I.tau(), "tau");
  if (I.upper().included) closed(I.sigma(), "sigma");
  return res;
}

}  // namespace ulamkit::quad
