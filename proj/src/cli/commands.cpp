#include "copmaint/cli/commands.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "copmaint/cli/scenario.hpp"
#include "copmaint/cli/tables.hpp"
#include "copmaint/errors.hpp"

namespace copmaint::cli {

using nlohmann::json;

json to_json(const ConditionReport& r) {
  json j;
  j["components_ifr"] = r.components_ifr;
  j["monotonicity"] = {{"verdict", std::string(to_string(r.monotonicity.verdict))},
                       {"passed", r.monotonicity.passed()},
                       {"grid_resolution", r.monotonicity.grid_resolution},
                       {"worst_violation", r.monotonicity.worst_violation},
                       {"rationale", r.monotonicity.rationale}};
  j["threshold"] = std::string(to_string(r.threshold));
  if (r.threshold != ThresholdVerdict::NotRequired) {
    // Infinite lhs is written as a string; JSON has no infinity.
    if (std::isinf(r.threshold_lhs))
      j["threshold_lhs"] = "inf";
    else
      j["threshold_lhs"] = r.threshold_lhs;
    j["threshold_rhs"] = r.threshold_rhs;
  }
  j["passed"] = r.passed();
  return j;
}

json to_json(const PolicyResult& r) {
  json j;
  j["policy"] = r.kind == PolicyKind::Age ? "age" : "periodic";
  j["deviation"] = r.deviation;
  if (r.kind == PolicyKind::Age)
    j["optimum"] = {{"T", r.T}};
  else
    j["optimum"] = {{"K", r.K}, {"tau", r.tau}, {"T", r.T}};
  j["cost_rate"] = r.cost_rate;
  j["uniqueness_guaranteed"] = r.uniqueness_guaranteed;
  j["condition_report"] = to_json(r.conditions);
  j["method_trace"] = {{"method", r.trace.method},
                       {"bracket", {r.trace.bracket_lo, r.trace.bracket_hi}},
                       {"iterations", r.trace.iterations},
                       {"residual", r.trace.residual},
                       {"predicates_agree", r.trace.predicates_agree},
                       {"notes", r.trace.notes}};
  return j;
}

json to_json(const SimEstimate& e) {
  return {{"cost_rate_mean", e.cost_rate_mean}, {"std_error", e.std_error}, {"cycles_run", e.cycles_run}};
}

namespace {

std::string num(double v) {
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s.precision(10);
  s << v;
  return s.str();
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

void print_conditions(std::ostream& out, const ConditionReport& r, Topology t) {
  const auto ifr = std::count(r.components_ifr.begin(), r.components_ifr.end(), true);
  out << "components IFR: " << yes_no(r.all_ifr()) << " (" << ifr << " of " << r.components_ifr.size() << ")\n";
  out << (t == Topology::Series ? "alpha-monotonicity: " : "eta-monotonicity: ")
      << (r.monotonicity.passed() ? "PASS" : "FAIL") << " (" << r.monotonicity.rationale << ")\n";
  out << "threshold: " << to_string(r.threshold);
  if (r.threshold == ThresholdVerdict::Yes || r.threshold == ThresholdVerdict::No)
    out << " (lhs=" << num(r.threshold_lhs) << ", rhs=" << num(r.threshold_rhs) << ")";
  else if (r.threshold == ThresholdVerdict::TriviallyInfiniteHazard)
    out << " (hazard grows without bound, rhs=" << num(r.threshold_rhs) << ")";
  else if (r.threshold == ThresholdVerdict::Undetermined)
    out << " (limiting hazard not decided: " << r.hazard_limit.note << ")";
  out << "\n";
}

void print_result(std::ostream& out, const PolicyResult& r, const SystemSpec& s) {
  out << "policy: " << (r.kind == PolicyKind::Age ? "age" : "periodic") << (r.deviation ? " with deviation costs" : "")
      << "\n";
  out << "system: " << to_string(s.topology()) << ", " << s.size() << " components, " << to_string(s.copula().family())
      << " copula\n";
  if (r.kind == PolicyKind::Age)
    out << "optimum: T* = " << num(r.T) << "\n";
  else
    out << "optimum: K* = " << r.K << " (tau = " << num(r.tau) << ", T = " << num(r.T) << ")\n";
  out << "cost rate: " << num(r.cost_rate) << "\n";
  print_conditions(out, r.conditions, s.topology());
  out << "uniqueness: " << (r.uniqueness_guaranteed ? "guaranteed" : "not guaranteed") << "\n";
  out << "method: " << r.trace.method << ", " << r.trace.iterations << " iterations, bracket [" << num(r.trace.bracket_lo)
      << ", " << num(r.trace.bracket_hi) << "], residual " << num(r.trace.residual) << "\n";
  for (const auto& n : r.trace.notes) out << "note: " << n << "\n";
}

/// Runs f against the -o file when given, else against out.
int with_output(const std::string& path, std::ostream& out, const std::function<int(std::ostream&)>& f) {
  if (path.empty()) return f(out);
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot write '" + path + "'");
  file.imbue(std::locale::classic());
  const int rc = f(file);
  file.flush();
  if (!file) throw Error("write to '" + path + "' failed");
  return rc;
}

struct OptimizeArgs {
  std::string scenario;
  bool json = false;
  bool strict = false;
  bool dump = false;
  double tau = 0.0;
  std::string output;
};

Scenario load_with_overrides(const OptimizeArgs& a, bool force_periodic) {
  Scenario s = load_scenario(a.scenario);
  if (a.tau > 0.0) s.tau = a.tau;
  if (force_periodic) {
    s.kind = PolicyKind::Periodic;
    s.T.reset();
    if (!(s.tau > 0.0)) throw ScenarioError("scenario: field 'policy.tau': required for periodic policies (or pass --tau)");
  }
  return s;
}

int cmd_optimize(const OptimizeArgs& a, bool force_periodic, std::ostream& out) {
  const Scenario s = load_with_overrides(a, force_periodic);
  if (a.dump) return with_output(a.output, out, [&](std::ostream& o) { o << dump_scenario(s); return 0; });
  const CostModel m(s.system, s.costs);
  const PolicyResult r = s.kind == PolicyKind::Age ? optimize_age(m, s.deviation) : optimize_periodic(m, s.tau, s.deviation);
  const int rc = a.strict && !r.uniqueness_guaranteed ? kStrictFailure : kOk;
  return with_output(a.output, out, [&](std::ostream& o) {
    if (a.json)
      o << to_json(r).dump(2) << "\n";
    else
      print_result(o, r, s.system);
    return rc;
  });
}

int cmd_check(const OptimizeArgs& a, std::ostream& out) {
  const Scenario s = load_with_overrides(a, false);
  if (a.dump) return with_output(a.output, out, [&](std::ostream& o) { o << dump_scenario(s); return 0; });
  const ConditionReport r = check_conditions(s.system, s.costs, s.deviation);
  const int rc = a.strict && !r.passed() ? kStrictFailure : kOk;
  return with_output(a.output, out, [&](std::ostream& o) {
    if (a.json) {
      o << to_json(r).dump(2) << "\n";
    } else {
      print_conditions(o, r, s.system.topology());
      o << "verdict: finite unique optimum " << (r.passed() ? "guaranteed" : "not guaranteed") << "\n";
    }
    return rc;
  });
}

struct SimulateArgs {
  OptimizeArgs base;
  std::uint64_t cycles = 0;
  std::uint64_t seed = 0;
  bool seed_given = false;
  unsigned workers = 0;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  Scenario s = load_with_overrides(a.base, false);
  if (a.base.dump) return with_output(a.base.output, out, [&](std::ostream& o) { o << dump_scenario(s); return 0; });
  if (!s.mc && a.cycles == 0) throw ScenarioError("scenario: field 'mc': missing (or pass --cycles)");
  McSection mc = s.mc.value_or(McSection{});
  if (a.cycles) mc.cycles = a.cycles;
  if (a.seed_given) mc.seed = a.seed;
  // Fail on unsupported sampling before spending time on the optimizer.
  if (!sampling_supported(s.system.copula())) {
    Rng probe(0);
    sample_copula(s.system.copula(), probe);
  }
  const CostModel m(s.system, s.costs);
  double T = 0.0;
  std::string origin = "given";
  if (s.kind == PolicyKind::Age && s.T) {
    T = *s.T;
  } else if (s.kind == PolicyKind::Periodic && s.K) {
    T = *s.K * s.tau;
  } else {
    const PolicyResult r = s.kind == PolicyKind::Age ? optimize_age(m, s.deviation) : optimize_periodic(m, s.tau, s.deviation);
    T = r.T;
    origin = "optimized";
  }
  const double analytic = m.age_cost_rate(T, s.deviation);
  SimConfig cfg;
  cfg.n_cycles = mc.cycles;
  cfg.seed = mc.seed;
  cfg.policy = PolicyQuery::age(T, s.deviation);
  cfg.workers = a.workers;
  const SimEstimate e = estimate_cost_rate(s.system, s.costs, cfg);
  const double z = e.std_error > 0.0 ? (e.cost_rate_mean - analytic) / e.std_error : 0.0;
  return with_output(a.base.output, out, [&](std::ostream& o) {
    if (a.base.json) {
      json j = to_json(e);
      j["replacement_time"] = T;
      j["replacement_time_origin"] = origin;
      j["analytic_cost_rate"] = analytic;
      j["z_score"] = z;
      j["seed"] = mc.seed;
      o << j.dump(2) << "\n";
    } else {
      o << "replacement time: " << num(T) << " (" << origin << ")\n";
      o << "analytic cost rate: " << num(analytic) << "\n";
      o << "monte carlo: " << num(e.cost_rate_mean) << " +- " << num(e.std_error) << " (" << e.cycles_run
        << " cycles, seed " << mc.seed << ")\n";
      o << "z-score: " << num(z) << "\n";
    }
    return kOk;
  });
}

struct TableArgs {
  int id = 0;
  bool compare = false;
  unsigned workers = 0;
  std::string output;
};

int cmd_table(const TableArgs& a, std::ostream& out, std::ostream& err) {
  const TableDefinition def = table_definition(a.id);
  const auto rows = compute_table(def, a.workers);
  int rc = kOk;
  for (const auto& row : rows)
    for (const auto& cell : row.cells)
      if (!cell.result) {
        err << "table " << a.id << ", " << def.sweep << " = " << num(row.sweep) << ": " << cell.error << "\n";
        rc = kError;
      }
  with_output(a.output, out, [&](std::ostream& o) {
    write_table_csv(o, def, rows, a.compare);
    return 0;
  });
  return rc;
}

struct CurveArgs {
  OptimizeArgs base;
  std::string var = "T";
  double from = 0.0;
  double to = 0.0;
  int steps = 0;
  std::vector<double> thetas;
};

int cmd_curve(const CurveArgs& a, std::ostream& out) {
  const Scenario s = load_with_overrides(a.base, false);
  std::vector<double> grid;
  if (a.var == "T") {
    if (a.steps < 1) throw ParameterError("curve: --steps must be >= 1");
    if (!(a.from > 0.0)) throw ParameterError("curve: --from must be > 0");
    if (a.steps > 1 && !(a.to > a.from)) throw ParameterError("curve: need --to > --from for more than one step");
    for (int i = 0; i < a.steps; ++i) grid.push_back(a.steps == 1 ? a.from : a.from + (a.to - a.from) * i / (a.steps - 1));
  } else {
    if (!(s.tau > 0.0)) throw ParameterError("curve: K sweeps need policy.tau (or --tau)");
    if (a.from < 1.0 || a.from != std::floor(a.from) || a.to != std::floor(a.to) || a.to < a.from)
      throw ParameterError("curve: K sweeps need integers 1 <= --from <= --to");
    for (double k = a.from; k <= a.to; k += 1.0) grid.push_back(k);
  }
  std::vector<SystemSpec> systems;
  if (a.thetas.empty()) {
    systems.push_back(s.system);
  } else {
    for (double th : a.thetas)
      systems.emplace_back(s.system.topology(), s.system.components(),
                           CopulaModel(s.system.copula().family(), th, s.system.size()));
  }
  // One column per system, evaluated on worker threads and written in order.
  std::vector<std::vector<double>> cols(systems.size());
  std::vector<std::string> errors(systems.size());
  auto run = [&](std::size_t j) {
    try {
      const CostModel m(systems[j], s.costs);
      for (double x : grid)
        cols[j].push_back(a.var == "T" ? m.age_cost_rate(x, s.deviation)
                                       : m.periodic_cost_rate(static_cast<int>(x), s.tau, s.deviation));
    } catch (const Error& e) {
      errors[j] = e.what();
    }
  };
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const unsigned workers = std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()), systems.size());
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t j; (j = next.fetch_add(1)) < systems.size();) run(j);
    });
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (!e.empty()) throw Error("curve: " + e);
  return with_output(a.base.output, out, [&](std::ostream& o) {
    o << a.var;
    if (a.thetas.empty())
      o << ",cost_rate";
    else
      for (double th : a.thetas) o << ",theta_" << num(th);
    o << '\n';
    for (std::size_t i = 0; i < grid.size(); ++i) {
      o << (a.var == "T" ? num(grid[i]) : format_fixed(grid[i], 0));
      for (const auto& c : cols) o << ',' << format_fixed(c[i], 10);
      o << '\n';
    }
    return kOk;
  });
}

void add_scenario_options(CLI::App* cmd, OptimizeArgs& a) {
  cmd->add_option("scenario", a.scenario, "Scenario file (JSON)")->required();
  cmd->add_flag("--json", a.json, "Machine-readable output");
  cmd->add_flag("--dump-config", a.dump, "Print the normalized scenario and exit");
  cmd->add_option("--tau", a.tau, "Override the period length")->check(CLI::PositiveNumber);
  cmd->add_option("-o,--output", a.output, "Write to a file instead of stdout");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal age and periodic replacement for systems of dependent components", "copmaint"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "copmaint 1.0");

  OptimizeArgs opt, per, chk;
  auto* c_opt = app.add_subcommand("optimize", "Optimal replacement time T* (or K* for periodic scenarios)");
  add_scenario_options(c_opt, opt);
  c_opt->add_flag("--strict", opt.strict, "Exit 2 when uniqueness is not guaranteed");

  auto* c_per = app.add_subcommand("periodic", "Optimal period count K*; optimize with the policy forced to periodic");
  add_scenario_options(c_per, per);
  c_per->add_flag("--strict", per.strict, "Exit 2 when uniqueness is not guaranteed");

  auto* c_chk = app.add_subcommand("check", "Existence and uniqueness conditions");
  add_scenario_options(c_chk, chk);
  c_chk->add_flag("--strict", chk.strict, "Exit 2 when a condition fails");

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Monte Carlo cost rate beside the analytic value");
  add_scenario_options(c_sim, sim.base);
  c_sim->add_option("--cycles", sim.cycles, "Renewal cycles (overrides mc.cycles)")->check(CLI::PositiveNumber);
  c_sim->add_option("--seed", sim.seed, "Seed (overrides mc.seed)")->each([&](const std::string&) { sim.seed_given = true; });
  c_sim->add_option("--workers", sim.workers, "Threads (0 = all cores); does not change results");

  TableArgs tab;
  auto* c_tab = app.add_subcommand("table", "Recompute a published table as CSV");
  c_tab->add_option("id", tab.id, "Table number")->required()->check(CLI::Range(1, 10));
  c_tab->add_flag("--compare", tab.compare, "Add published values and differences");
  c_tab->add_option("--workers", tab.workers, "Threads (0 = all cores)");
  c_tab->add_option("-o,--output", tab.output, "Write to a file instead of stdout");

  CurveArgs cur;
  auto* c_cur = app.add_subcommand("curve", "Cost rate along a T or K grid as CSV");
  add_scenario_options(c_cur, cur.base);
  c_cur->add_option("--var", cur.var, "Sweep variable")->check(CLI::IsMember({"T", "K"}));
  c_cur->add_option("--from", cur.from, "First grid value")->required();
  c_cur->add_option("--to", cur.to, "Last grid value");
  c_cur->add_option("--steps", cur.steps, "Number of T values")->default_val(101);
  c_cur->add_option("--theta", cur.thetas, "Copula parameters, one column each")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kError;
  }

  try {
    if (c_opt->parsed()) return cmd_optimize(opt, false, out);
    if (c_per->parsed()) return cmd_optimize(per, true, out);
    if (c_chk->parsed()) return cmd_check(chk, out);
    if (c_sim->parsed()) return cmd_simulate(sim, out);
    if (c_tab->parsed()) return cmd_table(tab, out, err);
    if (c_cur->parsed()) return cmd_curve(cur, out);
  } catch (const CapabilityError& e) {
    err << "error: " << e.what() << "\n";
    return kCapability;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}

}  // namespace copmaint::cli
