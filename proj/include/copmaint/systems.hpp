#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "copmaint/copulas.hpp"
#include "copmaint/lifetimes.hpp"

namespace copmaint {

enum class Topology { Series, Parallel };

std::string_view to_string(Topology t);

/// A series or parallel system of dependent components.
///
/// Series systems couple component survival functions through the survival
/// copula; parallel systems couple component distribution functions through
/// the copula.
class SystemSpec {
public:
  SystemSpec(Topology topology, std::vector<LifetimeModel> components, CopulaModel copula);

  Topology topology() const noexcept { return topology_; }
  const std::vector<LifetimeModel>& components() const noexcept { return components_; }
  const CopulaModel& copula() const noexcept { return copula_; }
  std::size_t size() const noexcept { return components_.size(); }

  /// All components share one lifetime model.
  bool homogeneous() const noexcept;

  friend bool operator==(const SystemSpec&, const SystemSpec&) = default;

private:
  Topology topology_;
  std::vector<LifetimeModel> components_;
  CopulaModel copula_;
};

double system_survival(const SystemSpec& s, double t);
double system_cdf(const SystemSpec& s, double t);

/// -d/dt log survival via the chain rule through the copula.
///
/// Series: sum_i alpha_i(Fbar(t)) h_i(t). Parallel: sum_i eta_i(F(t)) h_i(t).
double system_hazard(const SystemSpec& s, double t);

double system_density(const SystemSpec& s, double t);

/// Integral of the system survival function with cached panel sums.
///
/// [0, t_max] is cut into equal panels, each integrated by adaptive
/// 15-point Gauss-Kronrod (absolute tolerance proportional to the subinterval,
/// split depth at most 60); t_max is doubled until survival drops below
/// 1e-12 and the tail bound S(t_max) t_max is negligible.
/// integral(T) adds the cached sums below T to one partial-panel rule, so
/// the result is monotone in T. Immutable after construction.
class SurvivalIntegral {
public:
  explicit SurvivalIntegral(const SystemSpec& s, std::size_t panels = 64);

  /// Integral of survival over [0, T].
  double integral(double T) const;
  /// Integral of survival over [a, b], a <= b.
  double integral(double a, double b) const;
  /// Mean time to failure.
  double mttf() const noexcept { return total_; }
  double t_max() const noexcept { return t_max_; }
  /// Quadrature error estimate plus the truncated tail bound.
  double error_estimate() const noexcept { return error_; }
  const SystemSpec& system() const noexcept { return system_; }

private:
  SystemSpec system_;
  double t_max_ = 0.0;
  double width_ = 0.0;
  std::vector<double> cumulative_;
  double total_ = 0.0;
  double error_ = 0.0;
};

/// Mean time to failure (absolute tolerance 1e-8).
double mttf(const SystemSpec& s);

/// Expected |T - X| for the system lifetime X.
double deviation_expected_time(const SystemSpec& s, double T);
double deviation_expected_time(const SurvivalIntegral& integral, double T);

enum class LimitKind { Finite, Infinite, Unknown };

std::string_view to_string(LimitKind k);

struct HazardLimit {
  LimitKind kind = LimitKind::Unknown;
  double value = 0.0;  // meaningful for Finite only
  bool analytic = false;
  std::string note;
};

/// lim_{t -> inf} system_hazard(t).
HazardLimit hazard_limit(const SystemSpec& s);

}  // namespace copmaint
