#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "copmaint/cost_models.hpp"
#include "copmaint/errors.hpp"
#include "copmaint/systems.hpp"

namespace copmaint::cli {

/// Malformed scenario document; the message names the line or field.
class ScenarioError : public Error {
public:
  using Error::Error;
};

struct McSection {
  std::uint64_t cycles = 1000000;
  std::uint64_t seed = 1;
  friend bool operator==(const McSection&, const McSection&) = default;
};

/// A scenario file: system, costs, policy and optional simulation settings.
///
///   {
///     "system": {
///       "topology": "series",
///       "components": [{"family": "weibull", "lambda": 0.4, "alpha": 2.5, "count": 2}],
///       "copula": {"family": "gumbel-hougaard", "theta": 2}
///     },
///     "costs": {"c_f": 100, "c_p": 5, "c_d1": 0, "c_d2": 0},
///     "policy": {"kind": "age", "deviation": false},
///     "mc": {"cycles": 1000000, "seed": 1}
///   }
///
/// c_p is a scalar (broadcast) or one value per component. "count" repeats a
/// component entry. policy.tau is required for periodic policies; policy.T
/// (age) or policy.K (periodic) fixes the replacement point for simulate.
struct Scenario {
  SystemSpec system;
  CostParams costs;
  PolicyKind kind = PolicyKind::Age;
  double tau = 0.0;
  bool deviation = false;
  std::optional<double> T;
  std::optional<int> K;
  std::optional<McSection> mc;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

/// Canonical JSON form; parse_scenario(dump_scenario(s)) == s.
std::string dump_scenario(const Scenario& s);

LifetimeFamily parse_lifetime_family(const std::string& name);
CopulaFamily parse_copula_family(const std::string& name);
Topology parse_topology(const std::string& name);

}  // namespace copmaint::cli
