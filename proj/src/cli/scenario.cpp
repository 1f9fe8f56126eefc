#include "copmaint/cli/scenario.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace copmaint::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ScenarioError("scenario: field '" + field + "': " + what);
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number, got " + std::string(v.type_name()));
  return v.get<double>();
}

std::string text(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string, got " + std::string(v.type_name()));
  return v.get<std::string>();
}

std::uint64_t count(const json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<long long>() < 1) fail(path, "expected a positive integer");
  return v.get<std::uint64_t>();
}

void reject_unknown(const json& obj, std::initializer_list<const char*> keys, const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : keys) known = known || it.key() == k;
    if (!known) fail(path.empty() ? it.key() : path + "." + it.key(), "unknown field");
  }
}

/// Re-raise library validation errors against the field that caused them.
template <class F>
auto at_field(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const ScenarioError&) {
    throw;
  } catch (const Error& e) {
    fail(path, e.what());
  }
}

}  // namespace

LifetimeFamily parse_lifetime_family(const std::string& name) {
  if (name == "weibull") return LifetimeFamily::Weibull;
  if (name == "exponential") return LifetimeFamily::Exponential;
  throw ScenarioError("unknown lifetime family '" + name + "' (weibull, exponential)");
}

CopulaFamily parse_copula_family(const std::string& name) {
  if (name == "gumbel-hougaard" || name == "gh") return CopulaFamily::GumbelHougaard;
  if (name == "clayton") return CopulaFamily::Clayton;
  if (name == "fgm") return CopulaFamily::FGM;
  if (name == "gumbel-barnett" || name == "gb") return CopulaFamily::GumbelBarnett;
  if (name == "independence") return CopulaFamily::Independence;
  throw ScenarioError("unknown copula family '" + name +
                      "' (gumbel-hougaard, clayton, fgm, gumbel-barnett, independence)");
}

Topology parse_topology(const std::string& name) {
  if (name == "series") return Topology::Series;
  if (name == "parallel") return Topology::Parallel;
  throw ScenarioError("unknown topology '" + name + "' (series, parallel)");
}

Scenario parse_scenario(const std::string& src) {
  json doc;
  try {
    doc = json::parse(src);
  } catch (const json::parse_error& e) {
    // nlohmann reports "at line L, column C" in the message.
    throw ScenarioError(std::string("scenario: syntax error: ") + e.what());
  }
  if (!doc.is_object()) throw ScenarioError("scenario: top level must be an object");
  reject_unknown(doc, {"system", "costs", "policy", "mc"}, "");

  const json& sys = require(doc, "system", "");
  reject_unknown(sys, {"topology", "components", "copula"}, "system");
  const Topology topology =
      at_field("system.topology", [&] { return parse_topology(text(require(sys, "topology", "system"), "system.topology")); });

  const json& comps = require(sys, "components", "system");
  if (!comps.is_array() || comps.empty()) fail("system.components", "expected a non-empty array");
  std::vector<LifetimeModel> models;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const std::string p = "system.components[" + std::to_string(i) + "]";
    const json& c = comps[i];
    if (!c.is_object()) fail(p, "expected an object");
    reject_unknown(c, {"family", "lambda", "alpha", "count"}, p);
    const auto fam = at_field(p + ".family", [&] { return parse_lifetime_family(text(require(c, "family", p), p + ".family")); });
    const double lambda = number(require(c, "lambda", p), p + ".lambda");
    double alpha = 1.0;
    if (c.contains("alpha")) alpha = number(c["alpha"], p + ".alpha");
    if (fam == LifetimeFamily::Exponential && alpha != 1.0) fail(p + ".alpha", "exponential components have alpha = 1");
    if (fam == LifetimeFamily::Weibull && !c.contains("alpha")) fail(p + ".alpha", "missing");
    const std::uint64_t reps = c.contains("count") ? count(c["count"], p + ".count") : 1;
    const auto m = at_field(p, [&] {
      return fam == LifetimeFamily::Weibull ? LifetimeModel::weibull(lambda, alpha) : LifetimeModel::exponential(lambda);
    });
    models.insert(models.end(), reps, m);
  }

  const json& cop = require(sys, "copula", "system");
  reject_unknown(cop, {"family", "theta"}, "system.copula");
  const auto cfam = at_field("system.copula.family", [&] {
    return parse_copula_family(text(require(cop, "family", "system.copula"), "system.copula.family"));
  });
  double theta = 0.0;
  if (cfam != CopulaFamily::Independence)
    theta = number(require(cop, "theta", "system.copula"), "system.copula.theta");
  const CopulaModel copula = at_field("system.copula.theta", [&] { return CopulaModel(cfam, theta, models.size()); });

  const json& costs = require(doc, "costs", "");
  reject_unknown(costs, {"c_f", "c_p", "c_d1", "c_d2"}, "costs");
  CostParams cp;
  cp.c_f = number(require(costs, "c_f", "costs"), "costs.c_f");
  const json& cpv = require(costs, "c_p", "costs");
  if (cpv.is_array()) {
    if (cpv.size() != models.size())
      fail("costs.c_p", "has " + std::to_string(cpv.size()) + " entries for " + std::to_string(models.size()) +
                            " components");
    for (std::size_t i = 0; i < cpv.size(); ++i) cp.c_p.push_back(number(cpv[i], "costs.c_p[" + std::to_string(i) + "]"));
  } else {
    cp.c_p.assign(models.size(), number(cpv, "costs.c_p"));
  }
  if (costs.contains("c_d1")) cp.c_d1 = number(costs["c_d1"], "costs.c_d1");
  if (costs.contains("c_d2")) cp.c_d2 = number(costs["c_d2"], "costs.c_d2");
  at_field("costs", [&] { cp.validate(models.size()); return 0; });

  Scenario s{SystemSpec(topology, std::move(models), copula), std::move(cp), PolicyKind::Age, 0.0, false,
             std::nullopt, std::nullopt, std::nullopt};

  const json& pol = require(doc, "policy", "");
  reject_unknown(pol, {"kind", "tau", "deviation", "T", "K"}, "policy");
  const std::string kind = text(require(pol, "kind", "policy"), "policy.kind");
  if (kind == "age")
    s.kind = PolicyKind::Age;
  else if (kind == "periodic")
    s.kind = PolicyKind::Periodic;
  else
    fail("policy.kind", "expected 'age' or 'periodic', got '" + kind + "'");
  if (pol.contains("deviation")) {
    if (!pol["deviation"].is_boolean()) fail("policy.deviation", "expected true or false");
    s.deviation = pol["deviation"].get<bool>();
  }
  if (pol.contains("tau")) {
    s.tau = number(pol["tau"], "policy.tau");
    if (!(s.tau > 0.0)) fail("policy.tau", "must be > 0");
  }
  if (s.kind == PolicyKind::Periodic && !pol.contains("tau")) fail("policy.tau", "required for periodic policies");
  if (pol.contains("T")) {
    if (s.kind != PolicyKind::Age) fail("policy.T", "only valid for age policies");
    s.T = number(pol["T"], "policy.T");
    if (!(*s.T > 0.0)) fail("policy.T", "must be > 0");
  }
  if (pol.contains("K")) {
    if (s.kind != PolicyKind::Periodic) fail("policy.K", "only valid for periodic policies");
    s.K = static_cast<int>(count(pol["K"], "policy.K"));
  }

  if (doc.contains("mc")) {
    const json& mc = doc["mc"];
    reject_unknown(mc, {"cycles", "seed"}, "mc");
    McSection m;
    if (mc.contains("cycles")) m.cycles = count(mc["cycles"], "mc.cycles");
    if (mc.contains("seed")) {
      if (!mc["seed"].is_number_unsigned()) fail("mc.seed", "expected a non-negative integer");
      m.seed = mc["seed"].get<std::uint64_t>();
    }
    s.mc = m;
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("scenario: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string dump_scenario(const Scenario& s) {
  json comps = json::array();
  for (const auto& m : s.system.components()) {
    json c{{"family", std::string(to_string(m.family()))}, {"lambda", m.rate()}};
    if (m.family() == LifetimeFamily::Weibull) c["alpha"] = m.shape();
    comps.push_back(c);
  }
  json cop{{"family", std::string(to_string(s.system.copula().family()))}};
  if (s.system.copula().family() != CopulaFamily::Independence) cop["theta"] = s.system.copula().theta();
  json doc;
  doc["system"] = {{"topology", std::string(to_string(s.system.topology()))}, {"components", comps}, {"copula", cop}};
  doc["costs"] = {{"c_f", s.costs.c_f}, {"c_p", s.costs.c_p}, {"c_d1", s.costs.c_d1}, {"c_d2", s.costs.c_d2}};
  json pol{{"kind", s.kind == PolicyKind::Age ? "age" : "periodic"}, {"deviation", s.deviation}};
  if (s.kind == PolicyKind::Periodic || s.tau > 0.0) pol["tau"] = s.tau;
  if (s.T) pol["T"] = *s.T;
  if (s.K) pol["K"] = *s.K;
  doc["policy"] = pol;
  if (s.mc) doc["mc"] = {{"cycles", s.mc->cycles}, {"seed", s.mc->seed}};
  return doc.dump(2) + "\n";
}

}  // namespace copmaint::cli
