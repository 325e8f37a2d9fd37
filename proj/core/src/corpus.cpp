#include "ulamkit/corpus.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "ulamkit/errors.hpp"
#include "ulamkit/riccati.hpp"

namespace ulamkit {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

CorpusEntry entry(std::string id, std::string description, std::string alpha,
                  std::string beta, std::string gamma, std::string forcing,
                  Interval I, std::string rho, expr::Params params = {}) {
  CorpusEntry e;
  e.id = id;
  e.description = std::move(description);
  e.problem = OscillatorProblem::from_strings(std::move(id), alpha, beta, gamma,
                                              forcing, I, std::move(params));
  e.rho = std::move(rho);
  return e;
}

}  // namespace

CorpusEntry example1() {
  CorpusEntry e = entry("exeq01", "t(1-t)x'' + (2-t)x' + x = 0 on (0,1)",
                        "t*(1-t)", "2-t", "1", "0", Interval::open(0, 1), "-1/t");
  e.expected_case = Case::kIII;
  e.target_B = 0.5;
  return e;
}

CorpusEntry example2() {
  CorpusEntry e = entry("exeq02", "x'' + (2/t)x' + 1 = 0 on (1,inf)", "1", "2/t",
                        "0", "-1", Interval::open(1, kInf), "-1/t");
  e.expected_verdict = Verdict::kInstabilityEvidence;
  e.witness = "(eps-1)*t^2/6";
  return e;
}

CorpusEntry example3(double sigma) {
  CorpusEntry e = entry(sigma == 1.0 ? "exeq03" : "exeq03(sigma=" + fmt(sigma) + ")",
                        "x'' + (2/t)x' + 1 = 0 on (0,sigma)", "1", "2/t", "0",
                        "-1", Interval::open(0, sigma), "-1/t");
  e.expected_case = Case::kIII;
  e.target_B = sigma * sigma / 6.0;
  return e;
}

CorpusEntry example4(double sigma) {
  CorpusEntry e = entry(sigma == 1.0 ? "exeq04" : "exeq04(sigma=" + fmt(sigma) + ")",
                        "x'' + (2/t)x' + x = 0 on (0,sigma)", "1", "2/t", "1",
                        "0", Interval::open(0, sigma), "-tan(t)-1/t");
  e.expected_case = Case::kIII;
  e.target_B = 1.0 - std::sin(sigma) / sigma;
  return e;
}

CorpusEntry example5() {
  CorpusEntry e = entry("exeq05", "x'' + (2/t)x' + x = 0 on (0,inf)", "1", "2/t",
                        "1", "0", Interval::open(0, kInf), "-tan(t)-1/t");
  e.expected_verdict = Verdict::kInstabilityEvidence;
  e.witness = "eps/(8*t)*(cos(t)+2*t*sin(t)-2*t^2*cos(t))";
  return e;
}

CorpusEntry example6(double a, double b, double sigma) {
  const bool dflt = a == 1.0 && b == 2.0 && sigma == 1.0;
  CorpusEntry e = entry(
      dflt ? "exeq06"
           : "exeq06(a=" + fmt(a) + ",b=" + fmt(b) + ",sigma=" + fmt(sigma) + ")",
      "t^(1-a)x'' + b t^(-a)x' + (b-2)t^(-1-a)x + t^(b-2) = 0 on (0,sigma)",
      "t^(1-a)", "b*t^(-a)", "(b-2)*t^(-1-a)", "-t^(b-2)",
      Interval::open(0, sigma), "-1/t", {{"a", a}, {"b", b}});
  e.expected_case = Case::kIII;
  e.target_B = std::pow(sigma, a + 1.0) / ((a + 2.0) * (a + b - 1.0));
  return e;
}

CorpusEntry constant_entry(double a0, double a1, double a2) {
  const ConstantCoefficientResult cc = constant_coefficients(a0, a1, a2);
  const TruncatedProblem tp = constant_coefficient_problem(a0, a1, a2);
  CorpusEntry e;
  e.id = "const(" + fmt(a0) + "," + fmt(a1) + "," + fmt(a2) + ")";
  e.description = "constant coefficients on the truncated interval (-" +
                  fmt(tp.T) + "," + fmt(tp.T) + ")";
  e.problem = tp.problem;
  e.problem.name = e.id;
  e.rho = expr::to_string(tp.rho);
  e.expected_case = cc.selected;
  e.target_B = cc.B;
  e.constant_coefficient = true;
  e.a0 = a0;
  e.a1 = a1;
  e.a2 = a2;
  return e;
}

std::vector<CorpusEntry> corpus() {
  return {example1(),
          example2(),
          example3(1.0),
          example4(1.0),
          example5(),
          example6(1.0, 2.0, 1.0),
          constant_entry(1, 3, 2),
          constant_entry(2, -2, -4),
          constant_entry(1, -3, 2)};
}

std::vector<CorpusEntry> corpus_sweeps() {
  return {example3(0.5),
          example3(2.0),
          example4(0.5),
          example4(1.5),
          example6(0.5, 1.5, 1.0),
          example6(2.0, 2.0, 0.5)};
}

StabilityReport analyze_entry(const CorpusEntry& e, bool best) {
  const RiccatiSolution rho =
      RiccatiSolution::analytic(expr::parse(e.rho), e.problem.params);
  AnalyzeOptions opt;
  opt.best = best;
  opt.witness = e.witness;
  return analyze(e.problem, rho, opt);
}

CorpusOutcome run_entry(const CorpusEntry& e) {
  CorpusOutcome out;
  out.id = e.id;
  out.target = e.target_B;
  const auto start = std::chrono::steady_clock::now();
  try {
    const StabilityReport r = analyze_entry(e, true);
    out.verdict = r.verdict;
    out.selected = r.selected;
    out.value = r.constant.B;
    std::ostringstream msg;
    bool ok = r.verdict == e.expected_verdict;
    if (!ok) {
      msg << "verdict " << to_string(r.verdict) << ", expected "
          << to_string(e.expected_verdict) << "; ";
    }
    if (e.expected_verdict == Verdict::kBestConstant) {
      if (r.selected != e.expected_case) {
        ok = false;
        msg << "case " << to_string(r.selected) << ", expected "
            << to_string(e.expected_case) << "; ";
      }
      if (e.target_B) {
        if (!r.constant.B) {
          ok = false;
          msg << "no best constant; ";
        } else if (std::abs(*r.constant.B - *e.target_B) > 1e-4 * *e.target_B) {
          ok = false;
          msg << "B " << fmt(*r.constant.B) << " vs target " << fmt(*e.target_B) << "; ";
        }
      }
    }
    out.passed = ok;
    out.message = ok ? "ok" : msg.str();
  } catch (const Error& err) {
    out.passed = false;
    out.message = std::string(err.kind()) + ": " + err.what();
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                    .count();
  return out;
}

}  // namespace ulamkit
