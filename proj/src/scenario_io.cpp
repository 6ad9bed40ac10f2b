#include "ftrect/scenario_io.hpp"

#include <fstream>
#include <sstream>

namespace ftrect {
namespace {

using nlohmann::json;

json pairs_to_json(const std::vector<std::pair<double, double>>& v) {
  json out = json::array();
  for (const auto& [a, b] : v) out.push_back({a, b});
  return out;
}

class Reader {
 public:
  explicit Reader(IssueList& issues) : issues_(issues) {}

  template <class T>
  void get(const json& obj, const std::string& key, const std::string& path, T& out) {
    if (!obj.contains(key)) return;
    try {
      out = obj.at(key).get<T>();
    } catch (const json::exception&) {
      issues_.add(path + key, "expected " + type_name<T>() + ", got " + obj.at(key).dump());
    }
  }

  template <class E, class Parse>
  void get_enum(const json& obj, const std::string& key, const std::string& path, E& out, Parse parse) {
    std::string name;
    if (!obj.contains(key)) return;
    if (!obj.at(key).is_string()) {
      issues_.add(path + key, "expected string");
      return;
    }
    try {
      out = parse(obj.at(key).get<std::string>());
    } catch (const std::invalid_argument& ex) {
      issues_.add(path + key, ex.what());
    }
  }

  void pairs(const json& obj, const std::string& key, const std::string& path, std::vector<std::pair<double, double>>& out) {
    if (!obj.contains(key)) return;
    const json& arr = obj.at(key);
    if (!arr.is_array()) {
      issues_.add(path + key, "expected array of [t, value] pairs");
      return;
    }
    out.clear();
    for (std::size_t k = 0; k < arr.size(); ++k) {
      const json& e = arr[k];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        issues_.add(path + key + "[" + std::to_string(k) + "]", "expected [t, value]");
        continue;
      }
      out.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
  }

 private:
  template <class T>
  static std::string type_name() {
    if constexpr (std::is_same_v<T, std::string>) return "string";
    else if constexpr (std::is_same_v<T, bool>) return "boolean";
    else if constexpr (std::is_integral_v<T>) return "integer";
    else return "number";
  }
  IssueList& issues_;
};

void check_keys(const json& doc, const json& schema, const std::string& path, IssueList& issues) {
  if (!doc.is_object()) return;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string p = path.empty() ? it.key() : path + "." + it.key();
    if (!schema.is_object() || !schema.contains(it.key())) {
      issues.add(p, "unknown field");
      continue;
    }
    const json& sub = schema.at(it.key());
    if (sub.is_object()) {
      if (!it->is_object()) {
        issues.add(p, "expected an object");
      } else {
        check_keys(*it, sub, p, issues);
      }
    }
  }
}

json itsmc_json(const ItsmcGains& g) {
  return {{"zeta", g.zeta}, {"mu", g.mu}, {"sigma", g.sigma}, {"p", g.p}, {"q", g.q}, {"p1", g.p1}, {"q1", g.q1}};
}

void read_itsmc(Reader& rd, const json& j, const std::string& path, ItsmcGains& g) {
  rd.get(j, "zeta", path, g.zeta);
  rd.get(j, "mu", path, g.mu);
  rd.get(j, "sigma", path, g.sigma);
  rd.get(j, "p", path, g.p);
  rd.get(j, "q", path, g.q);
  rd.get(j, "p1", path, g.p1);
  rd.get(j, "q1", path, g.q1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

}  // namespace

json scenario_to_json(const Scenario& sc) {
  json j;
  j["name"] = sc.name;
  j["description"] = sc.description;
  j["horizon"] = sc.horizon;
  j["dt"] = sc.dt;
  j["decimation"] = sc.decimation;
  j["control_divider"] = sc.control_divider;
  j["controller"] = to_string(sc.controller);
  j["current_controller"] = sc.current_controller ? to_string(*sc.current_controller) : "same";
  j["plant"] = {{"l", sc.plant.l},           {"r", sc.plant.r},
                {"c", sc.plant.c},           {"f_grid", sc.plant.f_grid},
                {"v_ll_rms", sc.plant.v_ll_rms}, {"v_dc_ref", sc.plant.v_dc_ref}};
  j["grid"] = {{"frequency", pairs_to_json(sc.grid.frequency)},
               {"amplitude", pairs_to_json(sc.grid.amplitude)},
               {"l_factor", sc.grid.l_factor},
               {"r_factor", sc.grid.r_factor}};
  json segs = json::array();
  for (const auto& s : sc.load.segments) segs.push_back({s.start, s.value});
  j["load"] = {{"kind", to_string(sc.load.kind)}, {"segments", segs},
               {"offset", sc.load.offset},        {"amplitude", sc.load.amplitude},
               {"frequency", sc.load.frequency},  {"literal_r", sc.load.literal_r}};
  j["disturbance"] = {{"delta", sc.bounds.delta}, {"eps", sc.bounds.eps}};
  json currents = json::array();
  for (const auto& c : sc.reference.currents) currents.push_back({c.t, c.i_d, c.i_q});
  j["reference"] = {{"v_dc", pairs_to_json(sc.reference.v_dc)}, {"currents", currents}};
  j["initial"] = {{"v_dc", sc.initial.v_dc},         {"i_d", sc.initial.i.x()},
                  {"i_q", sc.initial.i.y()},         {"z_tilde1", sc.initial.z_tilde1},
                  {"rho_hat", sc.initial.rho_hat},   {"acc_d", sc.initial.integral_acc.x()},
                  {"acc_q", sc.initial.integral_acc.y()}};
  const auto& v = sc.voltage;
  const auto& c = sc.current;
  const auto& b = sc.baseline;
  j["gains"] = {
      {"voltage",
       {{"p", v.p}, {"q", v.q}, {"k1", v.k1}, {"gamma", v.gamma}, {"delta", v.delta}, {"eta", v.eta},
        {"sigma", v.sigma}, {"eps_rate", v.eps_rate}, {"law", to_string(v.law)}, {"boundary_layer", v.boundary_layer}}},
      {"current",
       {{"p", c.p}, {"q", c.q}, {"beta", c.beta}, {"delta", c.delta}, {"eta", c.eta}, {"eps_bl", c.eps_bl}}},
      {"pi_pr",
       {{"voltage", {{"kp", b.pi_voltage.kp}, {"ki", b.pi_voltage.ki}}},
        {"current", {{"kp", b.pi_current.kp}, {"ki", b.pi_current.ki}}}}},
      {"adaptive_sta",
       {{"voltage", {{"alpha1", b.sta_voltage.alpha1}, {"alpha2", b.sta_voltage.alpha2}}},
        {"current", {{"alpha1", b.sta_current.alpha1}, {"alpha2", b.sta_current.alpha2}}}}},
      {"itsmc", {{"voltage", itsmc_json(b.itsmc_voltage)}, {"current", itsmc_json(b.itsmc_current)}}},
  };
  j["options"] = {{"p_v_base", sc.p_v_base},
                  {"ref_interpretation", to_string(sc.ref_interpretation)},
                  {"rho_tilde_form", to_string(sc.rho_tilde_form)},
                  {"adaptation_guard", to_string(sc.adaptation_guard)},
                  {"eso_bandwidth", sc.eso_bandwidth},
                  {"eso_init", sc.eso_init == EsoInit::measured ? "measured" : "zero"},
                  {"inner_loop", to_string(sc.inner_loop)}};
  return j;
}

Scenario scenario_from_json(const json& input) {
  IssueList issues;
  if (!input.is_object()) {
    issues.add("(root)", "scenario document must be an object");
    issues.throw_if_any();
  }
  const json schema = scenario_to_json(Scenario{});
  check_keys(input, schema, "", issues);
  json doc = schema;
  doc.merge_patch(input);

  Scenario sc;
  Reader rd(issues);
  rd.get(doc, "name", "", sc.name);
  rd.get(doc, "description", "", sc.description);
  rd.get(doc, "horizon", "", sc.horizon);
  rd.get(doc, "dt", "", sc.dt);
  rd.get(doc, "decimation", "", sc.decimation);
  rd.get(doc, "control_divider", "", sc.control_divider);
  rd.get_enum(doc, "controller", "", sc.controller, method_from_string);
  if (doc["current_controller"].is_string() && doc["current_controller"] != "same") {
    Method m = Method::proposed;
    rd.get_enum(doc, "current_controller", "", m, method_from_string);
    sc.current_controller = m;
  }

  const json& pl = doc["plant"];
  rd.get(pl, "l", "plant.", sc.plant.l);
  rd.get(pl, "r", "plant.", sc.plant.r);
  rd.get(pl, "c", "plant.", sc.plant.c);
  rd.get(pl, "f_grid", "plant.", sc.plant.f_grid);
  rd.get(pl, "v_ll_rms", "plant.", sc.plant.v_ll_rms);
  rd.get(pl, "v_dc_ref", "plant.", sc.plant.v_dc_ref);

  const json& gr = doc["grid"];
  rd.pairs(gr, "frequency", "grid.", sc.grid.frequency);
  rd.pairs(gr, "amplitude", "grid.", sc.grid.amplitude);
  rd.get(gr, "l_factor", "grid.", sc.grid.l_factor);
  rd.get(gr, "r_factor", "grid.", sc.grid.r_factor);
  // A grid file that only sets a nominal frequency in "plant" inherits it here.
  if (!(input.contains("grid") && input["grid"].contains("frequency"))) sc.grid.frequency = {{0.0, sc.plant.f_grid}};

  const json& ld = doc["load"];
  rd.get_enum(ld, "kind", "load.", sc.load.kind, load_kind_from_string);
  std::vector<std::pair<double, double>> segs;
  rd.pairs(ld, "segments", "load.", segs);
  sc.load.segments.clear();
  for (const auto& [t, v] : segs) sc.load.segments.push_back({t, v});
  rd.get(ld, "offset", "load.", sc.load.offset);
  rd.get(ld, "amplitude", "load.", sc.load.amplitude);
  rd.get(ld, "frequency", "load.", sc.load.frequency);
  rd.get(ld, "literal_r", "load.", sc.load.literal_r);

  rd.get(doc["disturbance"], "delta", "disturbance.", sc.bounds.delta);
  rd.get(doc["disturbance"], "eps", "disturbance.", sc.bounds.eps);

  const json& ref = doc["reference"];
  rd.pairs(ref, "v_dc", "reference.", sc.reference.v_dc);
  if (ref["currents"].is_array()) {
    for (std::size_t k = 0; k < ref["currents"].size(); ++k) {
      const json& e = ref["currents"][k];
      if (!e.is_array() || e.size() != 3) {
        issues.add("reference.currents[" + std::to_string(k) + "]", "expected [t, i_d, i_q]");
        continue;
      }
      sc.reference.currents.push_back({e[0].get<double>(), e[1].get<double>(), e[2].get<double>()});
    }
  } else {
    issues.add("reference.currents", "expected array");
  }

  const json& in = doc["initial"];
  double id = 0.0, iq = 0.0, ad = 0.0, aq = 0.0;
  rd.get(in, "v_dc", "initial.", sc.initial.v_dc);
  rd.get(in, "i_d", "initial.", id);
  rd.get(in, "i_q", "initial.", iq);
  rd.get(in, "z_tilde1", "initial.", sc.initial.z_tilde1);
  rd.get(in, "rho_hat", "initial.", sc.initial.rho_hat);
  rd.get(in, "acc_d", "initial.", ad);
  rd.get(in, "acc_q", "initial.", aq);
  sc.initial.i = Vec2(id, iq);
  sc.initial.integral_acc = Vec2(ad, aq);

  const json& gv = doc["gains"]["voltage"];
  const std::string pv = "gains.voltage.";
  rd.get(gv, "p", pv, sc.voltage.p);
  rd.get(gv, "q", pv, sc.voltage.q);
  rd.get(gv, "k1", pv, sc.voltage.k1);
  rd.get(gv, "gamma", pv, sc.voltage.gamma);
  rd.get(gv, "delta", pv, sc.voltage.delta);
  rd.get(gv, "eta", pv, sc.voltage.eta);
  rd.get(gv, "sigma", pv, sc.voltage.sigma);
  rd.get(gv, "eps_rate", pv, sc.voltage.eps_rate);
  rd.get_enum(gv, "law", pv, sc.voltage.law, law_variant_from_string);
  rd.get(gv, "boundary_layer", pv, sc.voltage.boundary_layer);

  const json& gc = doc["gains"]["current"];
  const std::string pc = "gains.current.";
  rd.get(gc, "p", pc, sc.current.p);
  rd.get(gc, "q", pc, sc.current.q);
  rd.get(gc, "beta", pc, sc.current.beta);
  rd.get(gc, "delta", pc, sc.current.delta);
  rd.get(gc, "eta", pc, sc.current.eta);
  rd.get(gc, "eps_bl", pc, sc.current.eps_bl);

  const json& gb = doc["gains"];
  auto& b = sc.baseline;
  rd.get(gb["pi_pr"]["voltage"], "kp", "gains.pi_pr.voltage.", b.pi_voltage.kp);
  rd.get(gb["pi_pr"]["voltage"], "ki", "gains.pi_pr.voltage.", b.pi_voltage.ki);
  rd.get(gb["pi_pr"]["current"], "kp", "gains.pi_pr.current.", b.pi_current.kp);
  rd.get(gb["pi_pr"]["current"], "ki", "gains.pi_pr.current.", b.pi_current.ki);
  rd.get(gb["adaptive_sta"]["voltage"], "alpha1", "gains.adaptive_sta.voltage.", b.sta_voltage.alpha1);
  rd.get(gb["adaptive_sta"]["voltage"], "alpha2", "gains.adaptive_sta.voltage.", b.sta_voltage.alpha2);
  rd.get(gb["adaptive_sta"]["current"], "alpha1", "gains.adaptive_sta.current.", b.sta_current.alpha1);
  rd.get(gb["adaptive_sta"]["current"], "alpha2", "gains.adaptive_sta.current.", b.sta_current.alpha2);
  read_itsmc(rd, gb["itsmc"]["voltage"], "gains.itsmc.voltage.", b.itsmc_voltage);
  read_itsmc(rd, gb["itsmc"]["current"], "gains.itsmc.current.", b.itsmc_current);

  const json& op = doc["options"];
  rd.get(op, "p_v_base", "options.", sc.p_v_base);
  rd.get_enum(op, "ref_interpretation", "options.", sc.ref_interpretation, ref_interpretation_from_string);
  rd.get_enum(op, "rho_tilde_form", "options.", sc.rho_tilde_form, rho_tilde_form_from_string);
  rd.get_enum(op, "adaptation_guard", "options.", sc.adaptation_guard, adaptation_guard_from_string);
  rd.get(op, "eso_bandwidth", "options.", sc.eso_bandwidth);
  rd.get_enum(op, "eso_init", "options.", sc.eso_init, [](const std::string& s) {
    if (s == "measured") return EsoInit::measured;
    if (s == "zero") return EsoInit::zero;
    throw std::invalid_argument("unknown eso_init '" + s + "' (expected measured or zero)");
  });

  rd.get_enum(op, "inner_loop", "options.", sc.inner_loop, inner_loop_from_string);

  issues.merge(sc.check(), "");
  issues.throw_if_any();
  return sc;
}

json with_defaults(const json& doc) {
  if (!doc.is_object()) throw ValidationError({"scenario: document must be an object"});
  IssueList issues;
  check_keys(doc, scenario_to_json(Scenario{}), "", issues);
  issues.throw_if_any();
  json merged = scenario_to_json(Scenario{});
  merged.merge_patch(doc);
  if (!doc.contains("grid") || !doc["grid"].contains("frequency")) {
    merged["grid"]["frequency"] = json::array({json::array({0.0, merged["plant"]["f_grid"]})});
  }
  return merged;
}

json load_scenario_document(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ValidationError({path.string() + ": cannot open scenario file"});
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& ex) {
    throw ValidationError({path.string() + ": " + ex.what()});
  }
  if (!doc.is_object()) throw ValidationError({path.string() + ": scenario document must be an object"});
  json merged = with_defaults(doc);
  apply_overrides(merged, overrides);
  return merged;
}

Scenario load_scenario(const std::filesystem::path& path) { return scenario_from_json(load_scenario_document(path)); }

void apply_overrides(json& doc, const std::vector<std::string>& overrides) {
  IssueList issues;
  for (const auto& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos || eq == 0) {
      issues.add("override '" + ov + "'", "expected dotted.path=value");
      continue;
    }
    const std::string key = ov.substr(0, eq);
    const std::string raw = ov.substr(eq + 1);
    json* node = &doc;
    bool ok = true;
    for (const auto& part : split(key, '.')) {
      if (!node->is_object() || !node->contains(part)) {
        ok = false;
        break;
      }
      node = &(*node)[part];
    }
    if (!ok) {
      issues.add(key, "override targets an unknown field");
      continue;
    }
    json value;
    try {
      value = json::parse(raw);
    } catch (const json::parse_error&) {
      value = raw;
    }
    *node = value;
  }
  issues.throw_if_any();
}

}  // namespace ftrect
