#include "ulamkit/ode.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

namespace ulamkit::ode {

std::string to_string(Status s) {
  switch (s) {
    case Status::kCompleted: return "completed";
    case Status::kBlowUp: return "blow_up";
    case Status::kStepCollapse: return "step_collapse";
    case Status::kMaxSteps: return "max_steps";
    case Status::kRhsFailure: return "rhs_failure";
  }
  return "completed";
}

namespace {

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0,
                 d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0,
                 d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0,
                 d7 = 69997945.0 / 29380423.0;

bool finite(const State& y) {
  return std::all_of(y.begin(), y.end(),
                     [](double v) { return std::isfinite(v); });
}

bool call(const Rhs& f, double t, const State& y, State& dy) {
  try {
    f(t, y, dy);
  } catch (const std::exception&) {
    return false;
  }
  return finite(dy);
}

}  // namespace

struct Integrator {
  static Result run(const Rhs& f, double t0, double t1, State y,
                    const Options& opt);
};

bool DenseSolution::covers(double t) const {
  const double lo = std::min(t0_, t_last_);
  const double hi = std::max(t0_, t_last_);
  return t >= lo && t <= hi;
}

const DenseSolution::Step& DenseSolution::locate(double t) const {
  const double dir = t_last_ >= t0_ ? 1.0 : -1.0;
  // Steps are ordered along the direction of integration.
  auto it = std::upper_bound(
      steps_.begin(), steps_.end(), t,
      [dir](double v, const Step& s) { return dir * v < dir * s.t; });
  if (it == steps_.begin()) return steps_.front();
  return *(it - 1);
}

State DenseSolution::operator()(double t) const {
  if (steps_.empty()) return y0_;
  const Step& s = locate(t);
  const double th = (t - s.t) / s.h;
  const double th1 = 1.0 - th;
  State y(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    const double* r = &s.r[5 * i];
    y[i] = r[0] + th * (r[1] + th1 * (r[2] + th * (r[3] + th1 * r[4])));
  }
  return y;
}

double DenseSolution::component(double t, std::size_t i) const {
  if (steps_.empty()) return y0_[i];
  const Step& s = locate(t);
  const double th = (t - s.t) / s.h;
  const double th1 = 1.0 - th;
  const double* r = &s.r[5 * i];
  return r[0] + th * (r[1] + th1 * (r[2] + th * (r[3] + th1 * r[4])));
}

State DenseSolution::derivative(double t) const {
  State dy(n_, 0.0);
  if (steps_.empty()) return dy;
  const Step& s = locate(t);
  const double th = (t - s.t) / s.h;
  const double th1 = 1.0 - th;
  for (std::size_t i = 0; i < n_; ++i) {
    const double* r = &s.r[5 * i];
    dy[i] = (r[1] + (th1 - th) * r[2] + (2 * th * th1 - th * th) * r[3] +
             (2 * th * th1 * th1 - 2 * th * th * th1) * r[4]) /
            s.h;
  }
  return dy;
}

Result Integrator::run(const Rhs& f, double t0, double t1, State y,
                       const Options& opt) {
  const std::size_t n = y.size();
  Result res;
  res.dense.n_ = n;
  res.dense.t0_ = t0;
  res.dense.t_last_ = t0;
  res.dense.y0_ = y;
  res.t_last = t0;
  res.y_last = y;
  if (t1 == t0) return res;
  const double dir = t1 > t0 ? 1.0 : -1.0;

  State k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), yt(n), ynew(n);
  if (!call(f, t0, y, k1)) {
    res.status = Status::kRhsFailure;
    return res;
  }

  auto sk = [&](double a, double b) {
    return opt.atol + opt.rtol * std::max(std::abs(a), std::abs(b));
  };

  // Initial step (Hairer's hinit).
  double h = opt.h_init;
  const double hmax = std::min(opt.h_max, std::abs(t1 - t0));
  if (h == 0.0) {
    double dnf = 0, dny = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double s = sk(y[i], y[i]);
      dnf += (k1[i] / s) * (k1[i] / s);
      dny += (y[i] / s) * (y[i] / s);
    }
    h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
    h = std::min(h, hmax);
    for (std::size_t i = 0; i < n; ++i) yt[i] = y[i] + dir * h * k1[i];
    double der2 = 0;
    if (call(f, t0 + dir * h, yt, k2)) {
      for (std::size_t i = 0; i < n; ++i) {
        const double s = sk(y[i], y[i]);
        der2 += ((k2[i] - k1[i]) / s) * ((k2[i] - k1[i]) / s);
      }
      der2 = std::sqrt(der2) / h;
    }
    const double der12 = std::max(der2, std::sqrt(dnf));
    const double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3)
                                     : std::pow(0.01 / der12, 0.2);
    h = std::min({100 * h, h1, hmax});
  }
  h = std::min(std::abs(h), hmax);

  double t = t0;
  double facold = 1e-4;
  const double safe = 0.9, beta = 0.04, expo1 = 0.2 - beta * 0.75;
  bool last = false;
  bool reject = false;
  std::size_t nstep = 0;

  while (true) {
    if (nstep++ >= opt.max_steps) {
      res.status = Status::kMaxSteps;
      break;
    }
    if (h < opt.min_step_rel * std::max(std::abs(t), 1.0)) {
      res.status = Status::kStepCollapse;
      break;
    }
    if (dir * (t + dir * h - t1) >= 0.0) {
      h = std::abs(t1 - t);
      last = true;
    }
    const double hs = dir * h;
    bool ok = true;
    for (std::size_t i = 0; i < n; ++i) yt[i] = y[i] + hs * a21 * k1[i];
    ok = ok && call(f, t + c2 * hs, yt, k2);
    if (ok) {
      for (std::size_t i = 0; i < n; ++i)
        yt[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
      ok = call(f, t + c3 * hs, yt, k3);
    }
    if (ok) {
      for (std::size_t i = 0; i < n; ++i)
        yt[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
      ok = call(f, t + c4 * hs, yt, k4);
    }
    if (ok) {
      for (std::size_t i = 0; i < n; ++i)
        yt[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] +
                             a54 * k4[i]);
      ok = call(f, t + c5 * hs, yt, k5);
    }
    if (ok) {
      for (std::size_t i = 0; i < n; ++i)
        yt[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                             a64 * k4[i] + a65 * k5[i]);
      ok = call(f, t + hs, yt, k6);
    }
    if (ok) {
      for (std::size_t i = 0; i < n; ++i)
        ynew[i] = y[i] + hs * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] +
                               a75 * k5[i] + a76 * k6[i]);
      ok = call(f, t + hs, ynew, k7);
    }
    if (!ok) {
      // A stage hit a point where the RHS is undefined: retreat.
      h *= 0.25;
      last = false;
      reject = true;
      ++res.rejected;
      if (h < opt.min_step_rel * std::max(std::abs(t), 1.0)) {
        res.status = Status::kRhsFailure;
        break;
      }
      continue;
    }

    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                             e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double s = sk(y[i], ynew[i]);
      err += (e / s) * (e / s);
    }
    err = std::sqrt(err / static_cast<double>(n));

    const double fac11 = std::pow(err, expo1);
    double fac = fac11 / std::pow(facold, beta);
    fac = std::max(0.1, std::min(5.0, fac / safe));
    double hnew = h / fac;

    if (err <= 1.0) {
      facold = std::max(err, 1e-4);
      DenseSolution::Step st;
      st.t = t;
      st.h = hs;
      st.r.resize(5 * n);
      for (std::size_t i = 0; i < n; ++i) {
        const double ydiff = ynew[i] - y[i];
        const double bspl = hs * k1[i] - ydiff;
        double* r = &st.r[5 * i];
        r[0] = y[i];
        r[1] = ydiff;
        r[2] = bspl;
        r[3] = ydiff - hs * k7[i] - bspl;
        r[4] = hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                     d6 * k6[i] + d7 * k7[i]);
      }
      res.dense.steps_.push_back(std::move(st));
      t = last ? t1 : t + hs;
      y = ynew;
      k1 = k7;
      res.dense.t_last_ = t;
      res.t_last = t;
      res.y_last = y;
      bool blown = false;
      for (double v : y) blown = blown || std::abs(v) > opt.blowup;
      if (blown) {
        res.status = Status::kBlowUp;
        break;
      }
      if (last) {
        res.status = Status::kCompleted;
        break;
      }
      hnew = std::min(hnew, hmax);
      if (reject) hnew = std::min(hnew, h);
      reject = false;
      h = hnew;
    } else {
      h /= std::min(5.0, fac11 / safe);
      reject = true;
      last = false;
      ++res.rejected;
    }
  }
  return res;
}

Result dopri5(const Rhs& f, double t0, double t1, State y0,
              const Options& opt) {
  return Integrator::run(f, t0, t1, std::move(y0), opt);
}

}  // namespace ulamkit::ode
