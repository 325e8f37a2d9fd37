#include "ulamkit/problem_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ulamkit/errors.hpp"

namespace ulamkit {

using nlohmann::json;

void Tolerances::apply(AnalysisOptions& opt) const {
  if (residual) opt.residual_tol = *residual;
  if (reality) opt.reality_tol = *reality;
  if (existence_share) opt.existence_share = *existence_share;
  if (divergence_threshold) opt.divergence.threshold = *divergence_threshold;
  if (divergence_tail) opt.divergence.tail = *divergence_tail;
  if (layout_rel_tol) opt.layout.rel_tol = *layout_rel_tol;
}

namespace {

[[noreturn]] void bad(const std::string& what) { throw InvalidInput(what); }

std::string expr_field(const json& j, const char* key, bool required) {
  if (!j.contains(key)) {
    if (required) bad(std::string("missing field \"") + key + "\"");
    return {};
  }
  const json& v = j.at(key);
  if (v.is_string()) return v.get<std::string>();
  // Bare numbers are accepted as constant expressions.
  if (v.is_number()) {
    std::ostringstream os;
    os.precision(17);
    os << v.get<double>();
    return os.str();
  }
  bad(std::string("field \"") + key + "\" must be an expression string");
}

Endpoint endpoint(const json& iv, const char* key, const char* closed_key,
                  const char* inf_text, double inf_value) {
  if (!iv.contains(key)) bad(std::string("interval is missing \"") + key + "\"");
  Endpoint e;
  const json& v = iv.at(key);
  if (v.is_number()) {
    e.value = v.get<double>();
  } else if (v.is_string() && v.get<std::string>() == inf_text) {
    e.value = inf_value;
  } else {
    bad(std::string("interval.") + key + " must be a number or \"" + inf_text + "\"");
  }
  if (iv.contains(closed_key)) {
    if (!iv.at(closed_key).is_boolean()) {
      bad(std::string("interval.") + closed_key + " must be a boolean");
    }
    e.included = iv.at(closed_key).get<bool>();
  }
  return e;
}

std::optional<double> number_at(const json& t, const char* key) {
  if (!t.contains(key)) return std::nullopt;
  if (!t.at(key).is_number()) bad(std::string("tolerances.") + key + " must be a number");
  const double v = t.at(key).get<double>();
  if (!(v > 0.0)) bad(std::string("tolerances.") + key + " must be positive");
  return v;
}

}  // namespace

ProblemFile parse_problem(std::string_view json_text, std::string default_name) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    bad(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) bad("a problem file must be a JSON object");
  static const std::set<std::string> known = {
      "name", "description", "alpha", "beta", "gamma", "forcing",
      "interval", "rho", "params", "tolerances", "witness"};
  for (const auto& [k, v] : j.items()) {
    if (!known.count(k)) bad("unknown field \"" + k + "\"");
  }

  ProblemFile out;
  std::string name = default_name;
  if (j.contains("name")) {
    if (!j["name"].is_string()) bad("field \"name\" must be a string");
    name = j["name"].get<std::string>();
  }
  if (!j.contains("interval") || !j["interval"].is_object()) {
    bad("missing object \"interval\"");
  }
  const json& iv = j["interval"];
  for (const auto& [k, v] : iv.items()) {
    if (k != "lower" && k != "upper" && k != "lower_closed" && k != "upper_closed") {
      bad("unknown field \"interval." + k + "\"");
    }
  }
  const Interval domain(endpoint(iv, "lower", "lower_closed", "-inf", -kInf),
                        endpoint(iv, "upper", "upper_closed", "inf", kInf));

  expr::Params params;
  if (j.contains("params")) {
    if (!j["params"].is_object()) bad("field \"params\" must be an object");
    for (const auto& [k, v] : j["params"].items()) {
      if (!v.is_number()) bad("parameter \"" + k + "\" must be a number");
      if (k == "t" || k == "i" || k == "pi") bad("parameter name \"" + k + "\" is reserved");
      params[k] = v.get<double>();
    }
  }
  out.problem = OscillatorProblem::from_strings(
      name, expr_field(j, "alpha", true), expr_field(j, "beta", true),
      expr_field(j, "gamma", true), expr_field(j, "forcing", true), domain,
      params);

  if (j.contains("rho")) {
    out.rho = expr_field(j, "rho", false);
    (void)expr::parse(*out.rho);  // fail early on malformed text
  }
  if (j.contains("witness")) {
    out.witness = expr_field(j, "witness", false);
    (void)expr::parse(*out.witness);
  }
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    if (!t.is_object()) bad("field \"tolerances\" must be an object");
    static const std::set<std::string> tol_keys = {
        "residual", "reality", "existence_share", "divergence_threshold",
        "divergence_tail", "layout_rel_tol"};
    for (const auto& [k, v] : t.items()) {
      if (!tol_keys.count(k)) bad("unknown field \"tolerances." + k + "\"");
    }
    Tolerances& tol = out.tolerances;
    tol.residual = number_at(t, "residual");
    tol.reality = number_at(t, "reality");
    tol.existence_share = number_at(t, "existence_share");
    tol.divergence_threshold = number_at(t, "divergence_threshold");
    tol.layout_rel_tol = number_at(t, "layout_rel_tol");
    if (t.contains("divergence_tail")) {
      if (!t["divergence_tail"].is_number_unsigned() ||
          t["divergence_tail"].get<std::size_t>() < 2) {
        bad("tolerances.divergence_tail must be an integer ≥ 2");
      }
      tol.divergence_tail = t["divergence_tail"].get<std::size_t>();
    }
  }
  return out;
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open problem file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string stem = path;
  if (const auto slash = stem.find_last_of('/'); slash != std::string::npos) {
    stem = stem.substr(slash + 1);
  }
  if (const auto dot = stem.rfind('.'); dot != std::string::npos) {
    stem = stem.substr(0, dot);
  }
  return parse_problem(ss.str(), stem);
}

std::string to_json(const ProblemFile& f) {
  const OscillatorProblem& p = f.problem;
  json j;
  j["name"] = p.name;
  j["alpha"] = p.alpha_text;
  j["beta"] = p.beta_text;
  j["gamma"] = p.gamma_text;
  j["forcing"] = p.forcing_text;
  json iv;
  const Interval& I = p.domain;
  if (I.lower().finite()) iv["lower"] = I.tau(); else iv["lower"] = "-inf";
  if (I.upper().finite()) iv["upper"] = I.sigma(); else iv["upper"] = "inf";
  iv["lower_closed"] = I.lower().included;
  iv["upper_closed"] = I.upper().included;
  j["interval"] = iv;
  if (!p.params.empty()) {
    json ps = json::object();
    for (const auto& [k, v] : p.params) ps[k] = v;
    j["params"] = ps;
  }
  if (f.rho) j["rho"] = *f.rho;
  if (f.witness) j["witness"] = *f.witness;
  const Tolerances& t = f.tolerances;
  json tj = json::object();
  if (t.residual) tj["residual"] = *t.residual;
  if (t.reality) tj["reality"] = *t.reality;
  if (t.existence_share) tj["existence_share"] = *t.existence_share;
  if (t.divergence_threshold) tj["divergence_threshold"] = *t.divergence_threshold;
  if (t.divergence_tail) tj["divergence_tail"] = *t.divergence_tail;
  if (t.layout_rel_tol) tj["layout_rel_tol"] = *t.layout_rel_tol;
  if (!tj.empty()) j["tolerances"] = tj;
  return j.dump(2);
}

}  // namespace ulamkit
