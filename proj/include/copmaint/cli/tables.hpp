#pragma once

#include <array>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "copmaint/cost_models.hpp"
#include "copmaint/optimizers.hpp"
#include "copmaint/systems.hpp"

namespace copmaint::cli {

/// One of the ten published optimal-policy tables: Weibull components
/// coupled by a Gumbel-Hougaard copula, c_f = 100, c_p = 5 per component and
/// three deviation-cost scenarios as column groups.
struct TableDefinition {
  int id = 0;
  Topology topology = Topology::Series;
  PolicyKind policy = PolicyKind::Age;
  std::string sweep;  // "n" or "theta"
  std::vector<double> sweep_values;
  double lambda = 0.4;
  double alpha = 2.5;
  double theta = 2.0;  // fixed theta for n-sweeps
  std::size_t n = 4;   // fixed n for theta-sweeps
  double tau = 0.1;    // periodic tables
  double c_f = 100.0;
  double c_p = 5.0;
  std::array<std::pair<double, double>, 3> deviation_costs{{{0.0, 0.0}, {2.0, 1.0}, {10.0, 5.0}}};

  SystemSpec system(double sweep_value) const;
  CostParams costs(std::size_t n_components, std::size_t scenario) const;
  bool deviation(std::size_t scenario) const { return scenario > 0; }
  /// CSV header, e.g. n,plain_T,plain_C,dev_2_1_T,dev_2_1_C,dev_10_5_T,dev_10_5_C
  std::vector<std::string> value_columns() const;
};

/// Throws ParameterError unless 1 <= id <= 10.
TableDefinition table_definition(int id);

struct ReferenceRow {
  double sweep = 0.0;
  std::array<std::optional<double>, 6> values;  // null where the source is unreadable
};

std::vector<ReferenceRow> reference_rows(int id);

struct TableCell {
  std::optional<PolicyResult> result;
  std::string error;
  /// Optimum as printed: T* or K*.
  double optimum() const;
};

struct TableRow {
  double sweep = 0.0;
  std::array<TableCell, 3> cells;
};

/// Recomputes every row; rows run on up to `workers` threads (0 = hardware
/// concurrency) and come back in sweep order.
std::vector<TableRow> compute_table(const TableDefinition& def, unsigned workers = 0);

/// With compare, every value column is followed by its published value and
/// the difference (computed - published).
void write_table_csv(std::ostream& out, const TableDefinition& def, const std::vector<TableRow>& rows, bool compare);

/// Fixed-point text for CSV cells, independent of the global locale.
std::string format_fixed(double v, int digits = 6);

}  // namespace copmaint::cli
