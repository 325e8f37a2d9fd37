#include <cmath>
#include <numbers>
#include <queue>
#include <string>

#include "ulamkit/errors.hpp"
#include "ulamkit/quad.hpp"

namespace ulamkit::quad {

namespace {

constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)>& g, double a, double b,
             std::size_t& evals) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = g(c);
  double kron = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double f1 = g(c - dx);
    const double f2 = g(c + dx);
    kron += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  evals += 15;
  return {a, b, kron * h, std::abs((kron - gauss) * h)};
}

bool finite_at(const std::function<double(double)>& g, double t) {
  try {
    return std::isfinite(g(t));
  } catch (const Error&) {
    return false;
  }
}

QuadResult adaptive_gk(const std::function<double(double)>& g, double a,
                       double b, const QuadOptions& opt) {
  QuadResult r;
  std::priority_queue<Segment> heap;
  Segment s0 = gk15(g, a, b, r.evaluations);
  heap.push(s0);
  double total = s0.value;
  double err = s0.error;
  while (err > std::max(opt.tol, opt.rel_tol * std::abs(total))) {
    if (!std::isfinite(total)) {
      throw Divergent("integrand is not finite on [" + std::to_string(a) +
                          ", " + std::to_string(b) + "]",
                      {{b - a, total}});
    }
    if (heap.size() >= opt.max_intervals) {
      throw MaxDepthExceeded("adaptive Gauss-Kronrod did not reach tolerance; "
                             "error estimate " + std::to_string(err));
    }
    Segment s = heap.top();
    heap.pop();
    const double m = 0.5 * (s.a + s.b);
    if (m <= s.a || m >= s.b) {
      throw MaxDepthExceeded("interval collapsed during subdivision");
    }
    Segment l = gk15(g, s.a, m, r.evaluations);
    Segment rr = gk15(g, m, s.b, r.evaluations);
    total += l.value + rr.value - s.value;
    err += l.error + rr.error - s.error;
    heap.push(l);
    heap.push(rr);
  }
  // Re-sum for accuracy (the running total accumulates cancellation).
  double sum = 0.0, comp = 0.0, esum = 0.0;
  while (!heap.empty()) {
    const Segment& s = heap.top();
    const double y = s.value - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    esum += s.error;
    heap.pop();
  }
  r.value = sum;
  r.error = esum;
  return r;
}

// Tanh-sinh on [a, b]; nodes are placed by their distance to the nearer
// endpoint so the singular end is approached without cancellation.
QuadResult tanh_sinh(const std::function<double(double)>& g, double a,
                     double b, const QuadOptions& opt) {
  const double h = 0.5 * (b - a);
  constexpr double kUMax = 4.0;
  QuadResult r;
  std::vector<std::pair<double, double>> trace;
  double edge = 0.0;

  auto term = [&](double u) -> double {
    const double v = 0.5 * std::numbers::pi * std::sinh(u);
    const double e = std::exp(-2 * std::abs(v));
    const double gap = 2 * h * e / (1 + e);
    const double w = h * 0.5 * std::numbers::pi * std::cosh(u) * 4 * e /
                     ((1 + e) * (1 + e));
    const double t = u < 0 ? a + gap : b - gap;
    if (gap == 0.0 || t <= a || t >= b || w == 0.0) return 0.0;
    double f = 0.0;
    try {
      f = g(t);
    } catch (const Error&) {
      if (gap > 1e-12 * (b - a)) throw;
      return 0.0;
    }
    ++r.evaluations;
    if (!std::isfinite(f)) {
      if (gap > 1e-12 * (b - a)) {
        throw Divergent("integrand not finite at interior point", trace);
      }
      return 0.0;
    }
    if (std::abs(u) >= kUMax - 0.5) edge = std::max(edge, std::abs(w * f));
    return w * f;
  };

  double step = 1.0;
  double sum = term(0.0);
  for (double u = step; u <= kUMax; u += step) sum += term(u) + term(-u);
  double estimate = sum * step;
  trace.emplace_back(step, estimate);
  for (int level = 1; level <= opt.max_levels; ++level) {
    step *= 0.5;
    for (double u = step; u <= kUMax; u += 2 * step) sum += term(u) + term(-u);
    const double next = sum * step;
    trace.emplace_back(step, next);
    const double diff = std::abs(next - estimate);
    estimate = next;
    if (level >= 3 && diff <= std::max(opt.tol, opt.rel_tol * std::abs(next))) {
      if (edge > 1e-6 * std::max(std::abs(next), 1e-300)) {
        throw Divergent("endpoint contribution does not decay", trace);
      }
      r.value = next;
      r.error = diff;
      return r;
    }
  }
  if (edge > 1e-6 * std::max(std::abs(estimate), 1e-300)) {
    throw Divergent("endpoint contribution does not decay", trace);
  }
  throw MaxDepthExceeded("tanh-sinh did not converge");
}

// ∫_a^∞ g  via  s = a + e^u  on a widening window u ∈ [−L, L].
QuadResult half_line(const std::function<double(double)>& g, double a,
                     double sign, const QuadOptions& opt) {
  auto mapped = [&](double u) {
    const double e = std::exp(u);
    const double s = a + sign * e;
    if (s == a) return 0.0;
    return g(s) * e;
  };
  std::vector<std::pair<double, double>> trace;
  QuadOptions inner = opt;
  inner.tol = opt.tol * 0.1;
  QuadResult prev;
  bool have_prev = false;
  for (double L = 8; L <= opt.max_window; L *= 2) {
    QuadResult cur;
    try {
      cur = adaptive_gk(mapped, -L, L, inner);
    } catch (const Divergent&) {
      trace.emplace_back(a + sign * std::exp(L), kInf);
      throw Divergent("integrand overflows on the infinite range", trace);
    }
    trace.emplace_back(a + sign * std::exp(L), cur.value);
    if (!std::isfinite(cur.value)) {
      throw Divergent("partial integrals overflow", trace);
    }
    if (have_prev) {
      const double diff = std::abs(cur.value - prev.value);
      if (diff <= std::max(opt.tol, opt.rel_tol * std::abs(cur.value))) {
        cur.error += diff;
        cur.evaluations += prev.evaluations;
        return cur;
      }
    }
    prev = cur;
    have_prev = true;
  }
  throw Divergent("partial integrals keep growing as the window widens", trace);
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& g, double a, double b,
                     const QuadOptions& opt) {
  if (std::isnan(a) || std::isnan(b)) throw InvalidInput("NaN integration limit");
  if (a == b) return {};
  if (a > b) {
    QuadResult r = integrate(g, b, a, opt);
    r.value = -r.value;
    return r;
  }
  if (std::isinf(a) && std::isinf(b)) {
    QuadOptions half = opt;
    half.tol = 0.5 * opt.tol;
    QuadResult l = half_line(g, 0.0, -1.0, half);
    QuadResult r = half_line(g, 0.0, 1.0, half);
    return {l.value + r.value, l.error + r.error, l.evaluations + r.evaluations};
  }
  if (std::isinf(b)) return half_line(g, a, 1.0, opt);
  if (std::isinf(a)) return half_line(g, b, -1.0, opt);
  if (finite_at(g, a) && finite_at(g, b)) return adaptive_gk(g, a, b, opt);
  return tanh_sinh(g, a, b, opt);
}

}  // namespace ulamkit::quad
