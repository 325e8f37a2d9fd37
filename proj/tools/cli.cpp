#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "ulamkit/corpus.hpp"
#include "ulamkit/dynamics.hpp"
#include "ulamkit/errors.hpp"
#include "ulamkit/problem_io.hpp"
#include "ulamkit/report.hpp"
#include "ulamkit/riccati.hpp"
#include "ulamkit/stability.hpp"

namespace ulamkit::cli {

using nlohmann::json;
namespace fs = std::filesystem;

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::kStableWithConstant:
    case Verdict::kBestConstant: return kStable;
    case Verdict::kInconclusive: return kInconclusive;
    case Verdict::kInstabilityEvidence: return kInstability;
  }
  return kInconclusive;
}

SolveRhoSpec parse_solve_rho(const std::string& text) {
  SolveRhoSpec s;
  bool have_t0 = false, have_rho0 = false;
  double im = 0.0;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw InvalidInput("--solve-rho: expected key=value, got \"" + item + "\"");
    }
    auto trim = [](std::string v) {
      const auto a = v.find_first_not_of(" \t");
      const auto b = v.find_last_not_of(" \t");
      return a == std::string::npos ? std::string() : v.substr(a, b - a + 1);
    };
    const std::string key = trim(item.substr(0, eq));
    const std::string val = trim(item.substr(eq + 1));
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(val, &used);
      if (used != val.size()) throw std::invalid_argument(val);
    } catch (const std::exception&) {
      throw InvalidInput("--solve-rho: \"" + val + "\" is not a number");
    }
    if (key == "t0") {
      s.t0 = v;
      have_t0 = true;
    } else if (key == "rho0") {
      s.rho0.real(v);
      have_rho0 = true;
    } else if (key == "rho0_im") {
      im = v;
    } else {
      throw InvalidInput("--solve-rho: unknown key \"" + key + "\"");
    }
  }
  if (!have_t0 || !have_rho0) {
    throw InvalidInput("--solve-rho needs both t0= and rho0=");
  }
  s.rho0.imag(im);
  return s;
}

namespace {

// Defaults, then the config file (ULAMKIT_CONFIG or --config), then flags.
struct Settings {
  bool best = false;
  bool fast_path = false;
  bool probe = true;
  bool reproducible = false;
  std::optional<std::string> solve_rho;
  std::optional<double> tol;
  double epsilon = 0.1;
  std::size_t trials = 32;
  std::uint64_t seed = 7;
  std::string out_dir;
};

void load_config(const std::string& path, Settings& s) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InvalidInput("malformed config " + path + ": " + e.what());
  }
  if (!j.is_object()) throw InvalidInput("config must be a JSON object");
  try {
    for (const auto& [k, v] : j.items()) {
      if (k == "best") s.best = v.get<bool>();
      else if (k == "probe") s.probe = v.get<bool>();
      else if (k == "reproducible") s.reproducible = v.get<bool>();
      else if (k == "tol") s.tol = v.get<double>();
      else if (k == "epsilon") s.epsilon = v.get<double>();
      else if (k == "trials") s.trials = v.get<std::size_t>();
      else if (k == "seed") s.seed = v.get<std::uint64_t>();
      else if (k == "out") s.out_dir = v.get<std::string>();
      else throw InvalidInput("unknown config key \"" + k + "\"");
    }
  } catch (const json::type_error& e) {
    throw InvalidInput(std::string("config value of the wrong type: ") + e.what());
  }
}

bool input_error(const Error& e) {
  const std::string k = e.kind();
  return k == "InvalidInput" || k == "SyntaxError" || k == "UnknownFunction" ||
         k == "UnboundParameter" || k == "DegenerateLeadingCoefficient" ||
         k == "NotDifferentiable" || k == "DomainError";
}

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int analyze(const std::string& path, const Settings& s);
  int empirical(const std::string& path, const Settings& s);
  int corpus(const std::string& action, bool sweeps);
  int riccati_check(const std::string& path, const Settings& s);

 private:
  RiccatiSolution riccati(const ProblemFile& f, const Settings& s) const;
  AnalyzeOptions options(const ProblemFile& f, const Settings& s) const;
  Provenance provenance(const std::string& command, const ProblemFile& f,
                        const Settings& s, double seconds) const;
  void write_file(const Settings& s, const std::string& name,
                  const std::string& text) const;
  void emit(const Settings& s, const std::string& name, const std::string& report);

  std::ostream& out_;
  std::ostream& err_;
};

RiccatiSolution Runner::riccati(const ProblemFile& f, const Settings& s) const {
  if (s.solve_rho) {
    const SolveRhoSpec spec = parse_solve_rho(*s.solve_rho);
    if (!f.problem.domain.contains(spec.t0) ||
        f.problem.domain.lower().value == spec.t0 ||
        f.problem.domain.upper().value == spec.t0) {
      throw InvalidInput("--solve-rho: t0 must be interior to the domain");
    }
    return RiccatiSolution::numeric(solve_ivp(f.problem, spec.t0, spec.rho0));
  }
  if (!f.rho) {
    throw InvalidInput("the problem file has no \"rho\"; pass --solve-rho t0=..,rho0=..");
  }
  return RiccatiSolution::analytic(expr::parse(*f.rho), f.problem.params);
}

AnalyzeOptions Runner::options(const ProblemFile& f, const Settings& s) const {
  AnalyzeOptions o;
  f.tolerances.apply(o.analysis);
  if (s.tol) {
    if (!(*s.tol > 0.0)) throw InvalidInput("--tol must be positive");
    o.analysis.layout.rel_tol = *s.tol;
  }
  o.best = s.best;
  o.probe = s.probe;
  if (f.witness) o.witness = *f.witness;
  return o;
}

Provenance Runner::provenance(const std::string& command, const ProblemFile& f,
                              const Settings& s, double seconds) const {
  json cfg;
  cfg["command"] = command;
  cfg["best"] = s.best;
  cfg["fast_path"] = s.fast_path;
  cfg["probe"] = s.probe;
  cfg["solve_rho"] = s.solve_rho ? *s.solve_rho : "";
  cfg["tol"] = s.tol ? *s.tol : 0.0;
  cfg["epsilon"] = s.epsilon;
  cfg["trials"] = s.trials;
  cfg["seed"] = s.seed;
  cfg["problem"] = json::parse(to_json(f));
  Provenance p;
  p.config_hash = hex64(fnv1a(cfg.dump()));
  if (!s.reproducible) p.wall_time_s = seconds;
  return p;
}

void Runner::write_file(const Settings& s, const std::string& name,
                        const std::string& text) const {
  if (s.out_dir.empty()) return;
  fs::create_directories(s.out_dir);
  const fs::path path = fs::path(s.out_dir) / name;
  std::ofstream o(path);
  if (!o) throw InvalidInput("cannot write " + path.string());
  o << text;
}

void Runner::emit(const Settings& s, const std::string& name,
                  const std::string& report) {
  out_ << report;
  write_file(s, name + ".report.json", report);
}

std::string safe_name(std::string n) {
  for (char& c : n) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) {
      c = '_';
    }
  }
  return n.empty() ? "problem" : n;
}

int Runner::analyze(const std::string& path, const Settings& s) {
  const auto start = std::chrono::steady_clock::now();
  const ProblemFile f = load_problem(path);
  const OscillatorProblem& p = f.problem;
  StabilityReport r;
  if (s.fast_path) {
    Complex c[3];
    const expr::Expr* e[3] = {&p.alpha, &p.beta, &p.gamma};
    for (int k = 0; k < 3; ++k) {
      if (e[k]->depends_on_t()) {
        throw InvalidInput("--fast-path needs constant alpha, beta and gamma");
      }
      c[k] = expr::eval(*e[k], 0.0, p.params);
    }
    const ConstantCoefficientResult cc = constant_coefficients(c[0], c[1], c[2]);
    r.problem = p.name;
    r.selected = cc.selected;
    r.rho_source = "closed_form";
    r.covered_lower = p.domain.tau();
    r.covered_upper = p.domain.sigma();
    if (cc.L) {
      r.constant.kind = ConstantValue::Kind::kL;
      r.constant.L = *cc.L;
      r.verdict = Verdict::kStableWithConstant;
    }
    if (cc.B && s.best) {
      r.constant.kind = ConstantValue::Kind::kB;
      r.constant.B = *cc.B;
      r.verdict = Verdict::kBestConstant;
    }
    std::ostringstream note;
    note.precision(17);
    auto root = [&note](Complex z) {
      note << z.real();
      if (z.imag() != 0.0) note << (z.imag() > 0 ? "+" : "-") << std::abs(z.imag()) << "i";
    };
    note << "characteristic roots ";
    root(cc.roots.lambda1);
    note << ", ";
    root(cc.roots.lambda2);
    r.notes.push_back(note.str());
    if (p.domain.lower().finite() || p.domain.upper().finite()) {
      r.notes.push_back("closed form assumes the whole real line");
    }
  } else {
    r = ulamkit::analyze(p, riccati(f, s), options(f, s));
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const std::string name = safe_name(p.name);
  emit(s, name, report_json(r, provenance("analyze", f, s, secs)));
  for (const auto& d : r.divergence) {
    write_file(s, name + "." + d.condition + ".csv", trace_csv(d.trace));
  }
  if (r.instability) {
    write_file(s, name + ".growth.csv", trace_csv(r.instability->growth));
  }
  return exit_code(r.verdict);
}

int Runner::empirical(const std::string& path, const Settings& s) {
  if (!(s.epsilon > 0.0) || !std::isfinite(s.epsilon)) {
    throw InvalidInput("--epsilon must be positive");
  }
  if (s.trials == 0) throw InvalidInput("--trials must be at least 1");
  const auto start = std::chrono::steady_clock::now();
  const ProblemFile f = load_problem(path);
  const RiccatiSolution rho = riccati(f, s);
  AnalyzeOptions o = options(f, s);
  o.best = true;
  o.probe = false;
  StabilityReport r = ulamkit::analyze(f.problem, rho, o);
  EmpiricalBlock block;
  block.epsilon = s.epsilon;
  block.seed = s.seed;
  block.trials = s.trials;
  const std::string name = safe_name(f.problem.name);
  const bool stable = r.verdict == Verdict::kStableWithConstant ||
                      r.verdict == Verdict::kBestConstant;
  int code = exit_code(r.verdict);
  if (!stable) {
    r.notes.push_back("no Ulam constant established; experiments skipped");
  } else {
    block.bound = r.constant.B ? *r.constant.B : r.constant.L;
    const AnalysisContext ctx(f.problem, rho, o.analysis);
    block.extremal = extremal_experiment(ctx, r.selected, s.epsilon);
    try {
      block.random = random_perturbation_test(ctx, r.selected, s.epsilon,
                                              s.trials, s.seed, block.bound);
    } catch (const RatioExceedsConstant& e) {
      block.failure = e.what();
      code = kInconclusive;
    }
    write_file(s, name + ".extremal.csv", trace_csv(block.extremal->trace));
    if (block.random) {
      std::vector<std::pair<double, double>> ratios;
      for (std::size_t k = 0; k < block.random->ratios.size(); ++k) {
        ratios.emplace_back(static_cast<double>(k), block.random->ratios[k]);
      }
      write_file(s, name + ".random.csv", trace_csv(ratios));
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  emit(s, name, report_json(r, provenance("empirical", f, s, secs), &block));
  return code;
}

int Runner::corpus(const std::string& action, bool sweeps) {
  std::vector<CorpusEntry> entries = ulamkit::corpus();
  if (sweeps) {
    for (auto& e : corpus_sweeps()) entries.push_back(std::move(e));
  }
  auto target_text = [](const CorpusEntry& e) {
    std::ostringstream os;
    os.precision(12);
    if (e.target_B) {
      os << "B=" << *e.target_B;
    } else {
      os << to_string(e.expected_verdict);
    }
    return os.str();
  };
  if (action == "list") {
    out_ << std::left << std::setw(30) << "id" << std::setw(6) << "case"
         << "target\n";
    for (const auto& e : entries) {
      out_ << std::setw(30) << e.id << std::setw(6) << to_string(e.expected_case)
           << target_text(e) << "\n";
    }
    return kStable;
  }
  bool all = true;
  out_ << std::left << std::setw(30) << "id" << std::setw(6) << "pass"
       << std::setw(22) << "verdict" << std::setw(22) << "value" << "target\n";
  for (const auto& e : entries) {
    const CorpusOutcome o = run_entry(e);
    all = all && o.passed;
    std::ostringstream v;
    v.precision(12);
    if (o.value) v << *o.value; else v << "-";
    out_ << std::setw(30) << o.id << std::setw(6) << (o.passed ? "PASS" : "FAIL")
         << std::setw(22) << to_string(o.verdict) << std::setw(22) << v.str()
         << target_text(e);
    if (!o.passed) out_ << "  (" << o.message << ")";
    out_ << "\n";
  }
  return all ? kStable : kInconclusive;
}

int Runner::riccati_check(const std::string& path, const Settings& s) {
  const ProblemFile f = load_problem(path);
  AnalysisOptions ao;
  f.tolerances.apply(ao);
  const RiccatiSolution rho = riccati(f, s);
  json j;
  j["problem"] = f.problem.name;
  j["rho_source"] = rho.source_name();
  const double res = residual_sup(f.problem, rho);
  j["residual_sup"] = res;
  j["tolerance"] = ao.residual_tol;
  bool ok = res <= ao.residual_tol;
  if (const NumericSolution* n = rho.numeric_solution()) {
    j["lower"] = n->lower();
    j["upper"] = n->upper();
    j["lower_status"] = n->lower_status();
    j["upper_status"] = n->upper_status();
    j["lower_blowup"] = n->lower_blowup();
    j["upper_blowup"] = n->upper_blowup();
  }
  j["passed"] = ok;
  out_ << j.dump(2) << "\n";
  return ok ? kStable : kInconclusive;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ulam stability of second-order linear ODEs", "ulamkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  Settings s;
  std::string config_path;
  std::string problem_path;
  bool best = false, fast_path = false, no_probe = false, reproducible = false;
  std::optional<double> tol, epsilon;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  std::string solve_rho, out_dir;
  std::string corpus_action;
  bool sweeps = false;

  auto common = [&](CLI::App* sc) {
    sc->add_option("problem", problem_path, "problem file (JSON)")->required();
    sc->add_option("--solve-rho", solve_rho,
                   "solve the Riccati equation from t0=..,rho0=.. instead of using \"rho\"");
    sc->add_option("--tol", tol, "relative tolerance of the cumulative quadrature");
    sc->add_flag("--reproducible", reproducible, "omit wall time from the report");
    sc->add_option("--out", out_dir, "directory for the report and CSV traces");
    sc->add_option("--config", config_path, "config file (default: $ULAMKIT_CONFIG)");
  };
  CLI::App* an = app.add_subcommand("analyze", "classify, compute constants and a verdict");
  common(an);
  an->add_flag("--best", best, "also compute the best constant and divergence evidence");
  an->add_flag("--fast-path", fast_path, "closed form for constant coefficients");
  an->add_flag("--no-probe", no_probe, "skip the instability probe");

  CLI::App* em = app.add_subcommand("empirical", "extremal and random perturbation experiments");
  common(em);
  em->add_option("--epsilon", epsilon, "perturbation size (> 0)");
  em->add_option("--trials", trials, "number of random perturbations");
  em->add_option("--seed", seed, "random seed");

  CLI::App* co = app.add_subcommand("corpus", "built-in problems with analytic targets");
  co->add_option("action", corpus_action, "run | list")
      ->required()
      ->check(CLI::IsMember({"run", "list"}));
  co->add_flag("--sweeps", sweeps, "include the parameter sweeps");

  CLI::App* rc = app.add_subcommand("riccati-check", "residual of rho, or a numeric solve");
  common(rc);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kStable : kInputError;
  }

  Runner runner(out, err);
  try {
    if (config_path.empty()) {
      if (const char* env = std::getenv("ULAMKIT_CONFIG"); env && *env) config_path = env;
    }
    if (!config_path.empty()) load_config(config_path, s);
    if (best) s.best = true;
    if (fast_path) s.fast_path = true;
    if (no_probe) s.probe = false;
    if (reproducible) s.reproducible = true;
    if (tol) s.tol = tol;
    if (epsilon) s.epsilon = *epsilon;
    if (trials) s.trials = *trials;
    if (seed) s.seed = *seed;
    if (!solve_rho.empty()) s.solve_rho = solve_rho;
    if (!out_dir.empty()) s.out_dir = out_dir;

    if (an->parsed()) return runner.analyze(problem_path, s);
    if (em->parsed()) return runner.empirical(problem_path, s);
    if (co->parsed()) return runner.corpus(corpus_action, sweeps);
    if (rc->parsed()) return runner.riccati_check(problem_path, s);
  } catch (const Error& e) {
    err << error_json(e.kind(), e.what()) << "\n";
    return input_error(e) ? kInputError : kInconclusive;
  } catch (const fs::filesystem_error& e) {
    err << error_json("IoError", e.what()) << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace ulamkit::cli
