// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero when any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "ulamkit/corpus.hpp"
#include "ulamkit/dynamics.hpp"
#include "ulamkit/errors.hpp"
#include "ulamkit/stability.hpp"

using namespace ulamkit;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

RiccatiSolution rho_of(const CorpusEntry& e) {
  return RiccatiSolution::analytic(expr::parse(e.rho), e.problem.params);
}

oracle::Fn coef(const expr::Expr& e, const expr::Params& p) {
  return [e, p](double t) { return expr::eval(e, t, p); };
}

// Collects failures of one criterion.
struct Check {
  std::vector<std::string> failures;
  std::string detail;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Problems of criteria 1–4 with their closed-form best constants.
struct Target {
  CorpusEntry entry;
  double B;
  double budget;  // seconds
};

std::vector<Target> stable_targets() {
  std::vector<Target> v;
  v.push_back({example1(), 0.5, 5});
  for (double s : {0.5, 1.0, 2.0}) v.push_back({example3(s), s * s / 6, 5});
  for (double s : {0.5, 1.0, 1.5}) v.push_back({example4(s), 1 - std::sin(s) / s, 10});
  for (auto [a, b, s] : {std::tuple{1.0, 2.0, 1.0}, {0.5, 1.5, 1.0}, {2.0, 2.0, 0.5}}) {
    v.push_back({example6(a, b, s), std::pow(s, a + 1) / ((a + 2) * (a + b - 1)), 10});
  }
  return v;
}

// Analysis of one target with timing; fills `c` on mismatch.
StabilityReport best_of(const Target& t, Check& c) {
  const auto t0 = Clock::now();
  StabilityReport r = analyze_entry(t.entry, true);
  const double dt = seconds_since(t0);
  c.expect(dt < t.budget, fmt("%s took %.2fs", t.entry.id.c_str(), dt));
  c.expect(r.selected == Case::kIII, t.entry.id + ": case " + to_string(r.selected));
  c.expect(r.verdict == Verdict::kBestConstant,
           t.entry.id + ": verdict " + to_string(r.verdict));
  if (!r.constant.B) {
    c.expect(false, t.entry.id + ": no B");
  } else {
    c.expect(rel(*r.constant.B, t.B) <= 1e-4,
             fmt("%s: B=%.12g want %.12g", t.entry.id.c_str(), *r.constant.B, t.B));
  }
  return r;
}

bool report(int n, const Check& c) {
  std::printf("criterion %d: %s  %s\n", n, c.failures.empty() ? "PASS" : "FAIL",
              c.detail.c_str());
  for (const auto& f : c.failures) std::printf("    %s\n", f.c_str());
  std::fflush(stdout);
  return c.failures.empty();
}

bool criterion1() {
  Check c;
  const Target t = stable_targets()[0];
  const StabilityReport r = best_of(t, c);
  const FSup& f3 = r.f_sups.at("f3");
  const FSup& f4 = r.f_sups.at("f4");
  c.expect(f3.status == FSup::Status::kFinite && std::abs(f3.value - 0.5) <= 1e-6,
           fmt("f3=%.12g", f3.value));
  c.expect(f4.status == FSup::Status::kFinite && std::abs(f4.value - 1.0) <= 1e-6,
           fmt("f4=%.12g", f4.value));
  c.detail = fmt("B3=%.10f f3=%.10f f4=%.10f", r.constant.B.value_or(NAN), f3.value,
                 f4.value);
  return report(1, c);
}

bool criterion_family(int n, std::size_t from, std::size_t to) {
  Check c;
  const auto targets = stable_targets();
  std::ostringstream d;
  for (std::size_t k = from; k < to; ++k) {
    const StabilityReport r = best_of(targets[k], c);
    d << targets[k].entry.id << " B=" << fmt("%.8g", r.constant.B.value_or(NAN)) << "  ";
  }
  if (n == 3) {
    const double b = targets[5].B;
    c.expect(std::abs(b - 0.1585290151921035) <= 1e-15, fmt("sigma=1 target %.17g", b));
  }
  if (n == 4) {
    // Ex6 with (a, b, σ) = (1, 2, 1) coincides with Ex3 at σ = 1.
    const double b6 = *analyze_entry(targets[7].entry, true).constant.B;
    const double b3 = *analyze_entry(targets[2].entry, true).constant.B;
    c.expect(rel(b6, b3) <= 1e-4, fmt("Ex6(1,2,1)=%.12g vs Ex3(1)=%.12g", b6, b3));
  }
  c.detail = d.str();
  return report(n, c);
}

bool criterion5() {
  Check c;
  std::ostringstream d;
  const Case want_case[] = {Case::kIII, Case::kII, Case::kI};
  const double coeffs[3][3] = {{1, 3, 2}, {2, -2, -4}, {1, -3, 2}};
  for (int k = 0; k < 3; ++k) {
    const auto [a0, a1, a2] = std::tuple{coeffs[k][0], coeffs[k][1], coeffs[k][2]};
    const auto [l1, l2] = oracle::roots(a0, a1, a2);
    const double want = 1.0 / std::abs(a0 * l1.real() * l2.real());
    const CorpusEntry e = constant_entry(a0, a1, a2);
    const StabilityReport r = analyze_entry(e, true);
    c.expect(r.selected == want_case[k],
             e.id + ": case " + to_string(r.selected) + " want " + to_string(want_case[k]));
    c.expect(rel(r.constant.L, want) <= 1e-4,
             fmt("%s: L=%.12g want %.12g", e.id.c_str(), r.constant.L, want));
    d << e.id << " " << to_string(r.selected) << " L=" << fmt("%.8g", r.constant.L) << "  ";
  }
  c.detail = d.str();
  return report(5, c);
}

bool criterion6() {
  Check c;
  double worst = 0;
  for (const Target& t : stable_targets()) {
    const AnalysisContext ctx(t.entry.problem, rho_of(t.entry));
    for (double sign : {1.0, -1.0}) {
      const PerturbationExperiment x = extremal_experiment(ctx, Case::kIII, 0.1, sign);
      const double e = rel(x.ratio, t.B);
      worst = std::max(worst, e);
      c.expect(e <= 1e-3, fmt("%s sign %+g: ratio %.10g want %.10g", t.entry.id.c_str(),
                              sign, x.ratio, t.B));
    }
  }
  const PerturbationExperiment w = first_example_witness(0.1);
  c.expect(std::abs(w.ratio - 0.5) <= 1e-9, fmt("witness ratio %.12g", w.ratio));
  c.detail = fmt("max rel dev %.2e, witness ratio %.10f", worst, w.ratio);
  return report(6, c);
}

bool criterion7() {
  Check c;
  double worst = 0;
  for (const Target& t : stable_targets()) {
    const AnalysisContext ctx(t.entry.problem, rho_of(t.entry));
    try {
      const RandomTestResult r = random_perturbation_test(ctx, Case::kIII, 0.1, 32, 7, t.B);
      worst = std::max(worst, r.max_ratio / t.B);
      c.expect(r.ratios.size() == 32, t.entry.id + ": trial count");
      c.expect(r.max_ratio <= 1.02 * t.B,
               fmt("%s: max ratio %.10g > 1.02*%.10g", t.entry.id.c_str(), r.max_ratio, t.B));
    } catch (const std::exception& ex) {
      c.expect(false, t.entry.id + ": " + ex.what());
    }
  }
  c.detail = fmt("max ratio/B %.6f", worst);
  return report(7, c);
}

bool criterion8() {
  Check c;
  std::ostringstream d;
  for (const CorpusEntry& e : {example2(), example5()}) {
    const StabilityReport r = analyze_entry(e, true);
    c.expect(r.verdict == Verdict::kInstabilityEvidence,
             e.id + ": verdict " + to_string(r.verdict));
    if (!r.instability) {
      c.expect(false, e.id + ": no instability trace");
      continue;
    }
    const auto& g = r.instability->growth;
    if (g.size() < 2 || g.front().first != 10.0 || g.back().first != 1000.0) {
      c.expect(false, e.id + ": growth trace does not span 10..1000");
    } else {
      const double rise = g.back().second / g.front().second;
      c.expect(rise >= 10, fmt("%s: growth %.4g", e.id.c_str(), rise));
      d << e.id << fmt(" growth %.4g  ", rise);
    }
  }
  const StabilityReport r2 = analyze_entry(example2(), true);
  const auto f1 = r2.f_sups.at("f1").status;
  c.expect(f1 == FSup::Status::kDivergent || f1 == FSup::Status::kUnbounded,
           "exeq02: f1 " + to_string(f1));
  d << "exeq02 f1 " << to_string(f1) << "  ";
  int false_alarms = 0;
  for (const Target& t : stable_targets()) {
    const InstabilityTrace tr = instability_probe(t.entry.problem);
    if (tr.evidenced) {
      ++false_alarms;
      c.expect(false, t.entry.id + ": spurious instability evidence");
    }
  }
  d << "false alarms " << false_alarms;
  c.detail = d.str();
  return report(8, c);
}

bool criterion9() {
  Check c;
  double worst = 0;
  std::vector<CorpusEntry> all = corpus();
  for (const CorpusEntry& e : corpus_sweeps()) all.push_back(e);
  for (const CorpusEntry& e : all) {
    const double r = residual_sup(e.problem, expr::parse(e.rho));
    worst = std::max(worst, r);
    c.expect(r <= 1e-10, fmt("%s: residual %.3e", e.id.c_str(), r));
  }
  const CorpusEntry e1 = example1();
  const NumericSolution n = solve_ivp(e1.problem, 0.5, Complex(-2.0));
  double err = 0;
  for (int k = 0; k <= 900; ++k) {
    const double t = 0.05 + 0.9 * k / 900.0;
    err = std::max(err, std::abs(n.rho(t) - Complex(-1 / t)));
  }
  c.expect(err <= 1e-8, fmt("solve_ivp error %.3e", err));
  const auto osc =
      OscillatorProblem::from_strings("osc", "1", "0", "1", "0", Interval::open(-1, 3));
  const NumericSolution b = solve_ivp(osc, 0.0, Complex(0.0));
  const double half_pi = std::numbers::pi / 2;
  c.expect(b.upper_blowup() && b.upper() < half_pi && b.upper() > half_pi - 1e-2,
           fmt("blow-up at %.6f (flag %d)", b.upper(), int(b.upper_blowup())));
  c.detail = fmt("max residual %.2e, ivp error %.2e, blow-up at %.6f", worst, err, b.upper());
  return report(9, c);
}

// Comparison window for the representation check.
std::pair<double, double> window(const CorpusEntry& e) {
  if (e.constant_coefficient) return {-2, 2};
  if (e.id == "exeq02") return {2, 12};
  if (e.id == "exeq05") return {0.2, 1.2};
  const double lo = e.problem.domain.tau(), hi = e.problem.domain.sigma();
  return {lo + 0.05 * (hi - lo), lo + 0.95 * (hi - lo)};
}

bool criterion10() {
  Check c;
  double worst = 0;
  std::vector<CorpusEntry> all = corpus();
  for (const CorpusEntry& e : corpus_sweeps()) all.push_back(e);
  for (const CorpusEntry& e : all) {
    const auto [a, b] = window(e);
    const double t0 = (a + b) / 2;
    const IvpData ivp{t0, 1.0, -0.5};
    const auto& p = e.problem;
    try {
      const AnalysisContext ctx(p, rho_of(e));
      const Trajectory x = solve_representation(ctx, ivp);
      double err = 0;
      for (int k = 0; k <= 40; ++k) {
        const double t = a + (b - a) * k / 40.0;
        const Complex want = oracle::second_order_ivp(
            coef(p.alpha, p.params), coef(p.beta, p.params), coef(p.gamma, p.params),
            coef(p.forcing, p.params), t0, ivp.x0, ivp.x0p, t);
        err = std::max(err, std::abs(x(t) - want));
      }
      worst = std::max(worst, err);
      c.expect(err <= 1e-6, fmt("%s: sup error %.3e", e.id.c_str(), err));
    } catch (const std::exception& ex) {
      c.expect(false, e.id + ": " + ex.what());
    }
  }
  c.detail = fmt("%zu problems, max sup error %.2e", all.size(), worst);
  return report(10, c);
}

}  // namespace

int main() {
  int failed = 0;
  auto run = [&](int n, const std::function<bool()>& f) {
    try {
      if (!f()) ++failed;
    } catch (const std::exception& ex) {
      std::printf("criterion %d: FAIL  unexpected exception: %s\n", n, ex.what());
      ++failed;
    }
  };
  run(1, criterion1);
  run(2, [] { return criterion_family(2, 1, 4); });
  run(3, [] { return criterion_family(3, 4, 7); });
  run(4, [] { return criterion_family(4, 7, 10); });
  run(5, criterion5);
  run(6, criterion6);
  run(7, criterion7);
  run(8, criterion8);
  run(9, criterion9);
  run(10, criterion10);
  std::printf("%d of 10 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
