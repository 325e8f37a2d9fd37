#include "ulamkit/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace ulamkit {

using nlohmann::json;

std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

namespace {

// JSON has no infinities; they are spelled out.
json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

json pairs(const std::vector<std::pair<double, double>>& v) {
  json a = json::array();
  for (const auto& [x, y] : v) a.push_back(json::array({num(x), num(y)}));
  return a;
}

json to_json(const FSup& f) {
  json j;
  j["status"] = to_string(f.status);
  j["value"] = num(f.value);
  j["error"] = num(f.error);
  j["attained_at"] = num(f.attained_at);
  if (!f.note.empty()) j["note"] = f.note;
  return j;
}

json to_json(const DivergenceEvidence& d) {
  json j;
  j["condition"] = d.condition;
  j["limit"] = d.limit;
  j["endpoint"] = d.endpoint;
  j["t0"] = num(d.t0);
  j["threshold"] = num(d.threshold);
  j["threshold_crossed"] = d.threshold_crossed;
  j["monotone_tail"] = d.monotone_tail;
  j["status"] = d.holds() ? "evidenced" : "not_evidenced";
  j["trace"] = pairs(d.trace);
  return j;
}

json to_json(const PerturbationExperiment& e) {
  json j;
  j["epsilon"] = num(e.epsilon);
  j["perturbation"] = e.perturbation;
  j["sup_distance"] = num(e.sup_distance);
  j["ratio"] = num(e.ratio);
  j["attained_at"] = num(e.attained_at);
  j["trace"] = pairs(e.trace);
  return j;
}

}  // namespace

std::string report_json(const StabilityReport& r, const Provenance& prov,
                        const EmpiricalBlock* empirical) {
  json j;
  j["problem"] = r.problem;
  j["case"] = to_string(r.selected);
  j["verdict"] = to_string(r.verdict);
  json fs = json::object();
  for (const auto& [k, f] : r.f_sups) fs[k] = to_json(f);
  j["f_sups"] = fs;
  json dv = json::array();
  for (const auto& d : r.divergence) dv.push_back(to_json(d));
  j["divergence"] = dv;

  json c;
  switch (r.constant.kind) {
    case ConstantValue::Kind::kNone: c["kind"] = "none"; break;
    case ConstantValue::Kind::kL: c["kind"] = "L"; break;
    case ConstantValue::Kind::kB: c["kind"] = "B"; break;
  }
  if (r.constant.kind != ConstantValue::Kind::kNone) {
    c["L"] = num(r.constant.L);
    c["L_error"] = num(r.constant.L_error);
  }
  if (r.constant.B) {
    c["B"] = num(*r.constant.B);
    c["B_error"] = num(r.constant.B_error);
  }
  j["constant"] = c;

  if (r.instability) {
    const InstabilityTrace& t = *r.instability;
    json it;
    it["witness"] = t.witness;
    it["witness_residual_sup"] = num(t.witness_residual_sup);
    it["growth"] = pairs(t.growth);
    it["growth_factor"] = num(t.growth_factor);
    it["resolved"] = t.resolved;
    it["evidenced"] = t.evidenced;
    j["instability"] = it;
  } else {
    j["instability"] = nullptr;
  }

  json d;
  d["rho_source"] = r.rho_source;
  d["residual_sup"] = num(r.residual_sup);
  d["reduced_domain"] = r.reduced_domain;
  d["covered_lower"] = num(r.covered_lower);
  d["covered_upper"] = num(r.covered_upper);
  d["cumulative_error"] = num(r.cumulative_error);
  d["panels"] = r.panels;
  d["sup_scan_points"] = r.sup_scan_points;
  j["diagnostics"] = d;
  j["notes"] = r.notes;

  json p;
  p["tool_version"] = prov.tool_version;
  p["config_hash"] = prov.config_hash;
  if (prov.wall_time_s) p["wall_time_s"] = *prov.wall_time_s;
  j["provenance"] = p;

  if (empirical) {
    const EmpiricalBlock& e = *empirical;
    json ej;
    ej["epsilon"] = num(e.epsilon);
    ej["bound"] = num(e.bound);
    if (e.extremal) ej["extremal"] = to_json(*e.extremal);
    if (e.witness) ej["witness"] = to_json(*e.witness);
    if (e.random) {
      json rj;
      rj["seed"] = e.seed;
      rj["trials"] = e.trials;
      rj["max_ratio"] = num(e.random->max_ratio);
      json ratios = json::array();
      for (double v : e.random->ratios) ratios.push_back(num(v));
      rj["ratios"] = ratios;
      json ns = json::array();
      for (const auto& n : e.random->nearest) {
        ns.push_back({{"d1", num(n.params.d1)},
                      {"d2", num(n.params.d2)},
                      {"sup_distance", num(n.sup_distance)},
                      {"attained_at", num(n.attained_at)}});
      }
      rj["nearest"] = ns;
      ej["random"] = rj;
    }
    if (e.failure) ej["failure"] = *e.failure;
    j["empirical"] = ej;
  }
  return j.dump(2) + "\n";
}

std::string trace_csv(const std::vector<std::pair<double, double>>& trace,
                      const std::vector<double>* errors) {
  std::ostringstream os;
  os.precision(17);
  os << (errors ? "t,value,error\n" : "t,value\n");
  for (std::size_t k = 0; k < trace.size(); ++k) {
    os << trace[k].first << ',' << trace[k].second;
    if (errors) os << ',' << (k < errors->size() ? (*errors)[k] : 0.0);
    os << '\n';
  }
  return os.str();
}

std::string error_json(const std::string& kind, const std::string& message) {
  json j;
  j["error"] = {{"kind", kind}, {"message", message}};
  return j.dump();
}

}  // namespace ulamkit
