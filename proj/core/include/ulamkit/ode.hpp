// Dormand–Prince 5(4) with Hairer's continuous extension. Integrates in
// either direction; stops on blow-up, step collapse or a failing RHS
// instead of throwing.
#pragma once

#include <array>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace ulamkit::ode {

using State = std::vector<double>;
using Rhs = std::function<void(double t, const State& y, State& dydt)>;

struct Options {
  double rtol = 1e-10;
  double atol = 1e-12;
  double h_init = 0.0;  // 0: automatic
  double h_max = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 200000;
  /// Stop when any |y_i| exceeds this.
  double blowup = std::numeric_limits<double>::infinity();
  /// Step collapse: |h| < min_step_rel·max(|t|, 1).
  double min_step_rel = 1e-14;
};

enum class Status { kCompleted, kBlowUp, kStepCollapse, kMaxSteps, kRhsFailure };
std::string to_string(Status s);

class DenseSolution {
 public:
  [[nodiscard]] double t_begin() const { return t0_; }
  [[nodiscard]] double t_end() const { return t_last_; }
  [[nodiscard]] bool covers(double t) const;
  [[nodiscard]] State operator()(double t) const;
  [[nodiscard]] State derivative(double t) const;
  [[nodiscard]] double component(double t, std::size_t i) const;
  [[nodiscard]] std::size_t steps() const { return steps_.size(); }
  [[nodiscard]] std::size_t dimension() const { return n_; }

 private:
  friend struct Integrator;
  struct Step {
    double t, h;
    std::vector<double> r;  // 5·n continuous-extension coefficients
  };
  [[nodiscard]] const Step& locate(double t) const;
  std::size_t n_ = 0;
  double t0_ = 0.0;
  double t_last_ = 0.0;
  State y0_;
  std::vector<Step> steps_;
};

struct Result {
  DenseSolution dense;
  Status status = Status::kCompleted;
  double t_last = 0.0;  // last accepted time
  State y_last;
  std::size_t rejected = 0;
};

Result dopri5(const Rhs& f, double t0, double t1, State y0,
              const Options& opt = {});

}  // namespace ulamkit::ode
