#include "copmaint/cli/tables.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <thread>

#include <json.hpp>

#include "copmaint/cli/reference_data.hpp"
#include "copmaint/errors.hpp"

namespace copmaint::cli {

namespace {

const std::vector<double> kThetas{1.0, 2.0, 4.0, 5.0, 6.5, 8.5, 15.0};
const std::vector<double> kSizes{2, 3, 4, 5, 6, 7, 8};

TableDefinition n_sweep(int id, Topology t, PolicyKind p) {
  TableDefinition d;
  d.id = id;
  d.topology = t;
  d.policy = p;
  d.sweep = "n";
  d.sweep_values = kSizes;
  return d;
}

// Periodic theta tables reuse the age-policy generator with the policy switched.
TableDefinition theta_sweep(int id, Topology t, PolicyKind p, double lambda, double alpha) {
  TableDefinition d;
  d.id = id;
  d.topology = t;
  d.policy = p;
  d.sweep = "theta";
  d.sweep_values = kThetas;
  d.lambda = lambda;
  d.alpha = alpha;
  return d;
}

std::string scenario_tag(const std::pair<double, double>& cd) {
  if (cd.first == 0.0 && cd.second == 0.0) return "plain";
  return "dev_" + format_fixed(cd.first, 0) + "_" + format_fixed(cd.second, 0);
}

}  // namespace

std::string format_fixed(double v, int digits) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, digits);
  if (ec != std::errc()) return "nan";
  std::string s(buf, end);
  // No negative zero in output.
  if (s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

SystemSpec TableDefinition::system(double sweep_value) const {
  const std::size_t size = sweep == "n" ? static_cast<std::size_t>(sweep_value) : n;
  const double th = sweep == "theta" ? sweep_value : theta;
  return SystemSpec(topology, std::vector<LifetimeModel>(size, LifetimeModel::weibull(lambda, alpha)),
                    CopulaModel::gumbel_hougaard(th, size));
}

CostParams TableDefinition::costs(std::size_t n_components, std::size_t scenario) const {
  const auto& cd = deviation_costs.at(scenario);
  return CostParams::uniform(c_f, c_p, n_components, cd.first, cd.second);
}

std::vector<std::string> TableDefinition::value_columns() const {
  const char* opt = policy == PolicyKind::Age ? "T" : "K";
  std::vector<std::string> cols;
  for (const auto& cd : deviation_costs) {
    cols.push_back(scenario_tag(cd) + "_" + opt);
    cols.push_back(scenario_tag(cd) + "_C");
  }
  return cols;
}

TableDefinition table_definition(int id) {
  using T = Topology;
  using P = PolicyKind;
  switch (id) {
    case 1: return n_sweep(1, T::Series, P::Age);
    case 2: return n_sweep(2, T::Parallel, P::Age);
    case 3: return theta_sweep(3, T::Series, P::Age, 0.4, 2.5);
    case 4: return theta_sweep(4, T::Series, P::Age, 0.6, 1.5);
    case 5: return theta_sweep(5, T::Parallel, P::Age, 0.4, 2.5);
    case 6: return theta_sweep(6, T::Parallel, P::Age, 0.6, 1.5);
    case 7: return n_sweep(7, T::Series, P::Periodic);
    case 8: return n_sweep(8, T::Parallel, P::Periodic);
    case 9: return theta_sweep(9, T::Series, P::Periodic, 0.4, 2.5);
    case 10: return theta_sweep(10, T::Parallel, P::Periodic, 0.4, 2.5);
    default: throw ParameterError("table id must be in 1..10, got " + std::to_string(id));
  }
}

std::vector<ReferenceRow> reference_rows(int id) {
  table_definition(id);  // validates id
  static const nlohmann::json doc = nlohmann::json::parse(reference_tables_json());
  for (const auto& t : doc.at("tables")) {
    if (t.at("id").get<int>() != id) continue;
    std::vector<ReferenceRow> rows;
    for (const auto& r : t.at("rows")) {
      ReferenceRow row;
      row.sweep = r.at("sweep").get<double>();
      const auto& v = r.at("values");
      for (std::size_t k = 0; k < row.values.size(); ++k)
        if (!v.at(k).is_null()) row.values[k] = v.at(k).get<double>();
      rows.push_back(row);
    }
    return rows;
  }
  throw ParameterError("no reference data for table " + std::to_string(id));
}

double TableCell::optimum() const {
  if (!result) return std::nan("");
  return result->kind == PolicyKind::Age ? result->T : static_cast<double>(result->K);
}

std::vector<TableRow> compute_table(const TableDefinition& def, unsigned workers) {
  std::vector<TableRow> rows(def.sweep_values.size());
  auto run_row = [&](std::size_t i) {
    TableRow& row = rows[i];
    row.sweep = def.sweep_values[i];
    const SystemSpec s = def.system(row.sweep);
    for (std::size_t k = 0; k < row.cells.size(); ++k) {
      try {
        const CostModel m(s, def.costs(s.size(), k));
        row.cells[k].result = def.policy == PolicyKind::Age ? optimize_age(m, def.deviation(k))
                                                            : optimize_periodic(m, def.tau, def.deviation(k));
      } catch (const Error& e) {
        row.cells[k].error = e.what();
      }
    }
  };
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(rows.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < rows.size(); ++i) run_row(i);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < rows.size();) run_row(i);
    });
  for (auto& t : pool) t.join();
  return rows;
}

void write_table_csv(std::ostream& out, const TableDefinition& def, const std::vector<TableRow>& rows, bool compare) {
  const auto cols = def.value_columns();
  std::vector<ReferenceRow> ref;
  if (compare) ref = reference_rows(def.id);
  out << def.sweep;
  for (const auto& c : cols) {
    out << ',' << c;
    if (compare) out << ',' << c << "_published," << c << "_diff";
  }
  out << '\n';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    out << (def.sweep == "n" ? format_fixed(row.sweep, 0) : format_fixed(row.sweep, 1));
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const TableCell& cell = row.cells[j / 2];
      const bool is_opt = j % 2 == 0;
      double v = std::nan("");
      if (cell.result) v = is_opt ? cell.optimum() : cell.result->cost_rate;
      const int digits = is_opt && def.policy == PolicyKind::Periodic ? 0 : 6;
      out << ',' << format_fixed(v, digits);
      if (compare) {
        std::optional<double> p;
        if (i < ref.size() && ref[i].sweep == row.sweep) p = ref[i].values[j];
        out << ',' << (p ? format_fixed(*p, digits ? 4 : 0) : "") << ',' << (p ? format_fixed(v - *p, digits) : "");
      }
    }
    out << '\n';
  }
}

}  // namespace copmaint::cli
