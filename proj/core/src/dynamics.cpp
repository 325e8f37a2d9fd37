#include "ulamkit/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>
#include <thread>

#include "nelder_mead.hpp"
#include "ulamkit/errors.hpp"
#include "ulamkit/ode.hpp"

namespace ulamkit {

using quad::CumulativeIntegral;
using NodeValues = std::array<Complex, quad::kGaussOrder>;

Complex Trajectory::operator()(double t) const {
  // x_of loses a few digits next to a finite endpoint; a t inside the
  // covered range must not be rejected for that.
  const auto& L = R_.layout();
  double x = map_.x_of(t);
  const double slack = 1e-7 * (1.0 + std::abs(x));
  if (x > L.x_hi() && x < L.x_hi() + slack) x = L.x_hi();
  if (x < L.x_lo() && x > L.x_lo() - slack) x = L.x_lo();
  if (!L.covers(x)) {
    throw CoverageExceeded("t=" + std::to_string(t) + " is outside the trajectory");
  }
  return at_x(x);
}

Complex Trajectory::at_x(double x) const {
  return (c_ + K_(x)) * std::exp(R_(x) - r_anchor_);
}

double Trajectory::lower() const { return map_.t(R_.layout().x_lo()); }
double Trajectory::upper() const { return map_.t(R_.layout().x_hi()); }

Trajectory make_trajectory(const AnalysisContext& ctx, Complex c,
                           CumulativeIntegral K, double x_anchor) {
  Trajectory tr;
  tr.map_ = ctx.map();
  tr.R_ = ctx.R();
  tr.K_ = std::move(K);
  tr.c_ = c;
  tr.r_anchor_ = ctx.R()(x_anchor);
  return tr;
}

namespace {

double anchor_x(const AnalysisContext& ctx, double t0) {
  const double x = ctx.map().x_of(t0);
  if (!ctx.layout()->covers(x)) {
    throw CoverageExceeded("anchor t0=" + std::to_string(t0) +
                           " is outside the cumulative coverage");
  }
  return x;
}

// Tabulates h(x, k, i)·t'(x) at every node of the layout.
template <class H>
std::vector<NodeValues> tabulate(const AnalysisContext& ctx, H h) {
  const auto& L = *ctx.layout();
  std::vector<NodeValues> nv(L.panels());
  for (std::size_t k = 0; k < L.panels(); ++k) {
    for (std::size_t i = 0; i < quad::kGaussOrder; ++i) {
      const double x = L.node(k, i);
      nv[k][i] = h(x, k, i) * ctx.map().dt_dx(x);
    }
  }
  return nv;
}

}  // namespace

Trajectory solve_representation(
    const AnalysisContext& ctx, const IvpData& ivp,
    const std::function<Complex(double t)>& extra_forcing) {
  const double xa = anchor_x(ctx, ivp.t0);
  const Complex R0 = ctx.R()(xa);
  const Complex P0 = ctx.P()(xa);
  const Complex rho0 = ctx.rho()(ivp.t0);
  // Inner: ∫_{t0}^{s} e^{P(μ) − P(t0)} f(μ)/α(μ) dμ.
  auto inner_nodes = tabulate(ctx, [&](double x, std::size_t k, std::size_t i) {
    const double t = ctx.map().t(x);
    Complex f = ctx.forcing(t);
    if (extra_forcing) f += extra_forcing(t);
    return std::exp(ctx.P().at_node(k, i) - P0) * f / ctx.alpha(t);
  });
  const CumulativeIntegral inner =
      CumulativeIntegral::from_nodes(ctx.layout(), inner_nodes, xa);
  const Complex c1 = ivp.x0p - rho0 * ivp.x0;
  // Outer: ∫_{t0}^{t} (c1 + inner(s)) e^{−(R+P)(s) + (R+P)(t0)} ds.
  auto outer_nodes = tabulate(ctx, [&](double, std::size_t k, std::size_t i) {
    const Complex e = -(ctx.R().at_node(k, i) + ctx.P().at_node(k, i)) + R0 + P0;
    return (c1 + inner.at_node(k, i)) * std::exp(e);
  });
  return make_trajectory(
      ctx, ivp.x0, CumulativeIntegral::from_nodes(ctx.layout(), outer_nodes, xa),
      xa);
}

Trajectory homogeneous_member(const AnalysisContext& ctx,
                              const SolutionFamilyParams& params,
                              std::optional<double> t0) {
  const double xa = anchor_x(ctx, t0.value_or(ctx.t_ref()));
  const Complex RP0 = ctx.R()(xa) + ctx.P()(xa);
  auto nodes = tabulate(ctx, [&](double, std::size_t k, std::size_t i) {
    const Complex e = -(ctx.R().at_node(k, i) + ctx.P().at_node(k, i)) + RP0;
    return params.d1 * std::exp(e);
  });
  return make_trajectory(ctx, params.d2,
                         CumulativeIntegral::from_nodes(ctx.layout(), nodes, xa),
                         xa);
}

// ---------------------------------------------------------------------------
// Kernel ODE. With g the perturbation, the remainder r = ξ − x of the
// designated pair solves, in t,
//   u′ = g/α − (ρ + β/α) u,   r′ = ρ r + u,
// with both starting from zero at the end where the nested integrals of the
// case are anchored: τ for case iii, σ for case i; in case ii u starts from
// σ and r from τ. Work in the map coordinate, so each rate is scaled by t′.

KernelSolution solve_kernel(const AnalysisContext& ctx, Case c,
                            const std::function<double(double t)>& g) {
  if (c == Case::kNone) throw InvalidInput("no kernel for case none");
  const auto& L = *ctx.layout();
  const quad::EndpointMap map = ctx.map();
  auto coeffs = [&ctx, map](double x, Complex& rho, Complex& q, Complex& inv_a,
                            double& jac, double& t) {
    t = map.t(x);
    jac = map.dt_dx(x);
    const Complex a = ctx.alpha(t);
    rho = ctx.rho()(t);
    q = rho + ctx.beta(t) / a;
    inv_a = 1.0 / a;
  };
  ode::Options o;
  o.rtol = 1e-11;
  o.atol = 1e-15;
  o.max_steps = 1000000;

  // u and r together (cases i and iii).
  ode::Rhs both = [&](double x, const ode::State& y, ode::State& dy) {
    Complex rho, q, inv_a;
    double jac, t;
    coeffs(x, rho, q, inv_a, jac, t);
    const Complex u(y[0], y[1]), r(y[2], y[3]);
    const Complex du = (g(t) * inv_a - q * u) * jac;
    const Complex dr = (rho * r + u) * jac;
    dy = {du.real(), du.imag(), dr.real(), dr.imag()};
  };

  KernelSolution ks;
  ks.x_lo = L.x_lo();
  ks.x_hi = L.x_hi();
  auto check = [](const ode::Result& r) {
    if (r.status != ode::Status::kCompleted) {
      throw CoverageExceeded("kernel integration stopped: " + ode::to_string(r.status));
    }
  };
  std::shared_ptr<const ode::DenseSolution> dense_r;
  std::size_t r_index = 2;
  if (c == Case::kIII || c == Case::kI) {
    const bool fwd = c == Case::kIII;
    ode::Result res = ode::dopri5(both, fwd ? ks.x_lo : ks.x_hi,
                                  fwd ? ks.x_hi : ks.x_lo, {0, 0, 0, 0}, o);
    check(res);
    dense_r = std::make_shared<const ode::DenseSolution>(std::move(res.dense));
  } else {
    ode::Rhs uo = [&](double x, const ode::State& y, ode::State& dy) {
      Complex rho, q, inv_a;
      double jac, t;
      coeffs(x, rho, q, inv_a, jac, t);
      const Complex u(y[0], y[1]);
      const Complex du = (g(t) * inv_a - q * u) * jac;
      dy = {du.real(), du.imag()};
    };
    ode::Result ur = ode::dopri5(uo, ks.x_hi, ks.x_lo, {0, 0}, o);
    check(ur);
    auto du = std::make_shared<const ode::DenseSolution>(std::move(ur.dense));
    ode::Rhs ro = [&, du](double x, const ode::State& y, ode::State& dy) {
      Complex rho, q, inv_a;
      double jac, t;
      coeffs(x, rho, q, inv_a, jac, t);
      const Complex u(du->component(x, 0), du->component(x, 1));
      const Complex r(y[0], y[1]);
      const Complex dr = (rho * r + u) * jac;
      dy = {dr.real(), dr.imag()};
    };
    ode::Result rr = ode::dopri5(ro, ks.x_lo, ks.x_hi, {0, 0}, o);
    check(rr);
    dense_r = std::make_shared<const ode::DenseSolution>(std::move(rr.dense));
    r_index = 0;
  }
  ks.r = [dense_r, r_index](double x) { return dense_r->component(x, r_index); };
  ks.abs_r = [dense_r, r_index](double x) {
    return std::hypot(dense_r->component(x, r_index),
                      dense_r->component(x, r_index + 1));
  };
  return ks;
}

PerturbationExperiment extremal_experiment(const AnalysisContext& ctx, Case c,
                                           double epsilon, double sign) {
  if (!(epsilon > 0.0)) throw InvalidInput("epsilon must be positive");
  const double g0 = sign * epsilon;
  const KernelSolution ks = solve_kernel(ctx, c, [g0](double) { return g0; });
  const quad::SupResult s = quad::sup_over_x(ks.abs_r, ctx.map(), ks.x_lo, ks.x_hi,
                                             ctx.options().constant_sup);
  PerturbationExperiment out;
  out.epsilon = epsilon;
  out.perturbation = sign >= 0 ? "extremal" : "extremal(-)";
  out.sup_distance = s.sup_value;
  out.ratio = s.sup_value / epsilon;
  out.attained_at = s.attained_t;
  out.trace = s.trace;
  return out;
}

PerturbationExperiment first_example_witness(double epsilon) {
  if (!(epsilon > 0.0)) throw InvalidInput("epsilon must be positive");
  // ξ ≡ ε and x = ε(1 − t/2) solves t(1−t)x″ + (2−t)x′ + x = 0.
  auto dist = [epsilon](double t) {
    return std::abs(epsilon - epsilon * (1.0 - 0.5 * t));
  };
  const quad::SupResult s = quad::sup_over(dist, Interval::open(0.0, 1.0));
  PerturbationExperiment out;
  out.epsilon = epsilon;
  out.perturbation = "witness";
  out.sup_distance = s.sup_value;
  out.ratio = s.sup_value / epsilon;
  out.attained_at = s.attained_t;
  out.trace = s.trace;
  return out;
}

// ---------------------------------------------------------------------------

NearestSolution nearest_solution(const std::function<double(double t)>& r,
                                 const AnalysisContext& ctx) {
  const auto& L = *ctx.layout();
  const Trajectory y1 = homogeneous_member(ctx, {0.0, 1.0});  // e^{∫ρ}
  const Trajectory y2 = homogeneous_member(ctx, {1.0, 0.0});
  constexpr std::size_t kGrid = 513;
  std::vector<double> ts, d, u, v;
  for (std::size_t k = 0; k < kGrid; ++k) {
    const double x = L.x_lo() + (L.x_hi() - L.x_lo()) * static_cast<double>(k) /
                                    static_cast<double>(kGrid - 1);
    const double t = ctx.map().t(x);
    const double dv = r(t);
    const double uv = y2.at_x(x).real();  // d1 direction
    const double vv = y1.at_x(x).real();  // d2 direction
    if (!std::isfinite(dv) || !std::isfinite(uv) || !std::isfinite(vv)) continue;
    ts.push_back(t);
    d.push_back(dv);
    u.push_back(uv);
    v.push_back(vv);
  }
  const detail::MinimaxFit fit = detail::minimax_fit(d, u, v);
  NearestSolution out;
  out.params = {fit.c1, fit.c2};
  out.evaluations = fit.evaluations;
  out.sup_distance = fit.value;
  out.attained_at = ts.empty() ? 0.0 : ts[fit.index];
  // Refine between grid points.
  auto gap = [&](double x) {
    const double t = ctx.map().t(x);
    return std::abs(r(t) - fit.c1 * y2.at_x(x).real() - fit.c2 * y1.at_x(x).real());
  };
  // r is only known on the covered range; no extrapolation past it.
  quad::SupOptions so;
  so.divergence_threshold = kInf;
  so.extrapolate = false;
  const quad::SupResult s = quad::sup_over_x(gap, ctx.map(), L.x_lo(), L.x_hi(), so);
  if (std::isfinite(s.sup_value) && s.sup_value > out.sup_distance) {
    out.sup_distance = s.sup_value;
    out.attained_at = s.attained_t;
  }
  // The grid fit can lose to the origin once refined between nodes.
  if (out.params.d1 != 0.0 || out.params.d2 != 0.0) {
    const quad::SupResult o = quad::sup_over_x(
        [&](double x) { return std::abs(r(ctx.map().t(x))); }, ctx.map(), L.x_lo(),
        L.x_hi(), so);
    if (std::isfinite(o.sup_value) && o.sup_value < out.sup_distance) {
      out.params = {};
      out.sup_distance = o.sup_value;
      out.attained_at = o.attained_t;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

RandomPerturbation::RandomPerturbation(const quad::EndpointMap& map,
                                       std::uint64_t seed, std::uint64_t trial,
                                       double epsilon, int degree)
    : map_(map) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial),
                    static_cast<std::uint32_t>(trial >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> n01(0.0, 1.0);
  c0_ = n01(rng);
  for (int k = 1; k <= degree; ++k) {
    a_.push_back(n01(rng) / k);
    b_.push_back(n01(rng) / k);
  }
  // max|s| on [0, 1]: a fine scan, then golden refinement at the best sample.
  constexpr int kScan = 4097;
  double best = 0.0, best_th = 0.0;
  for (int i = 0; i < kScan; ++i) {
    const double th = static_cast<double>(i) / (kScan - 1);
    const double v = std::abs(raw(th));
    if (v > best) {
      best = v;
      best_th = th;
    }
  }
  double lo = std::max(0.0, best_th - 1.0 / (kScan - 1));
  double hi = std::min(1.0, best_th + 1.0 / (kScan - 1));
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 80; ++it) {
    const double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
    if (std::abs(raw(c)) >= std::abs(raw(d))) {
      hi = d;
    } else {
      lo = c;
    }
  }
  best = std::max(best, std::abs(raw(0.5 * (lo + hi))));
  // A hair of headroom covers the refinement's own error.
  scale_ = best > 0.0 ? epsilon / (best * (1.0 + 1e-10)) : 0.0;
  sup_ = best * scale_;
}

double RandomPerturbation::raw(double theta) const {
  constexpr double kTwoPi = 6.283185307179586;
  double s = c0_;
  for (std::size_t k = 0; k < a_.size(); ++k) {
    const double w = kTwoPi * static_cast<double>(k + 1) * theta;
    s += a_[k] * std::cos(w) + b_[k] * std::sin(w);
  }
  return s;
}

double RandomPerturbation::at_x(double x) const {
  return scale_ * raw(0.5 * (std::tanh(0.25 * x) + 1.0));
}

RandomTestResult random_perturbation_test(const AnalysisContext& ctx, Case c,
                                          double epsilon, std::size_t trials,
                                          std::uint64_t seed, double bound) {
  if (!(epsilon > 0.0)) throw InvalidInput("epsilon must be positive");
  RandomTestResult out;
  out.ratios.assign(trials, 0.0);
  out.nearest.assign(trials, {});
  auto run = [&](std::size_t k) {
    const RandomPerturbation g(ctx.map(), seed, k, epsilon);
    const KernelSolution ks = solve_kernel(ctx, c, g);
    const quad::EndpointMap& map = ctx.map();
    const NearestSolution ns = nearest_solution(
        [&](double t) {
          return ks.r(std::clamp(map.x_of(t), ks.x_lo, ks.x_hi));
        },
        ctx);
    out.nearest[k] = ns;
    out.ratios[k] = ns.sup_distance / epsilon;
  };
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(trials, std::thread::hardware_concurrency()));
  for (std::size_t start = 0; start < trials; start += workers) {
    std::vector<std::future<void>> jobs;
    for (std::size_t k = start; k < std::min(trials, start + workers); ++k) {
      jobs.push_back(std::async(std::launch::async, run, k));
    }
    for (auto& j : jobs) j.get();
  }
  for (std::size_t k = 0; k < trials; ++k) {
    out.max_ratio = std::max(out.max_ratio, out.ratios[k]);
    if (out.ratios[k] > bound * (1.0 + 2e-2)) {
      throw RatioExceedsConstant("trial " + std::to_string(k) + " ratio " +
                                     std::to_string(out.ratios[k]) +
                                     " exceeds the constant",
                                 out.ratios[k], bound);
    }
  }
  return out;
}

}  // namespace ulamkit
