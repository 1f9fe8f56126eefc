#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "copmaint/systems.hpp"

namespace copmaint {

/// Replacement costs. c_p holds one preventive cost per component.
struct CostParams {
  double c_f = 0.0;
  std::vector<double> c_p;
  double c_d1 = 0.0;  // per unit time the system is down before T
  double c_d2 = 0.0;  // per unit time of life wasted after T

  /// Same preventive cost for every one of n components.
  static CostParams uniform(double c_f, double c_p_each, std::size_t n, double c_d1 = 0.0, double c_d2 = 0.0);

  double preventive_total() const;

  /// Throws ParameterError unless c_f > 0, c_p_i >= 0, sum c_p < c_f,
  /// c_d1, c_d2 >= 0 and c_p has n entries.
  void validate(std::size_t n) const;

  friend bool operator==(const CostParams&, const CostParams&) = default;
};

enum class PolicyKind { Age, Periodic };

/// Which cost functional to evaluate: age policy at T, or periodic policy at
/// K periods of length tau.
struct PolicyQuery {
  PolicyKind kind = PolicyKind::Age;
  double T = 0.0;
  int K = 0;
  double tau = 0.0;
  bool deviation = false;

  static PolicyQuery age(double T, bool deviation) { return {PolicyKind::Age, T, 0, 0.0, deviation}; }
  static PolicyQuery periodic(int K, double tau, bool deviation) {
    return {PolicyKind::Periodic, 0.0, K, tau, deviation};
  }
  /// Planned replacement time T or K * tau.
  double replacement_time() const;
};

/// Expected cost rates of a system under the age and periodic policies.
///
/// Holds the survival integral of the system, built once; every evaluation
/// afterwards is a read-only lookup plus one partial-panel rule, so a single
/// model can be shared across threads.
///
/// Series:   [c_f - (c_f - sum c_p) S(T) + dev] / D(T) - [c_d2 if dev]
/// Parallel: [sum c_p + (c_f - sum c_p) F(T) + dev] / D(T) - [c_d2 if dev]
/// with S the system survival, F = 1 - S, D(T) the integral of S over [0,T]
/// and dev = c_d1 (T - D(T)) + c_d2 * MTTF.
class CostModel {
public:
  CostModel(SystemSpec system, CostParams costs);

  const SystemSpec& system() const noexcept { return integral_->system(); }
  const CostParams& costs() const noexcept { return costs_; }
  const SurvivalIntegral& integral() const noexcept { return *integral_; }
  double mttf() const noexcept { return integral_->mttf(); }

  double age_cost_rate(double T, bool deviation) const;
  /// Identical to age_cost_rate(K * tau, deviation).
  double periodic_cost_rate(int K, double tau, bool deviation) const;
  double cost_rate(const PolicyQuery& q) const;

  double deviation_expected_time(double T) const;

  /// Right-hand side of the optimal-cost identity at T:
  /// (c_f - sum c_p) h(T), plus c_d1 F(T)/S(T) - c_d2 with deviation costs.
  double optimum_identity(double T, bool deviation) const;

private:
  std::shared_ptr<const SurvivalIntegral> integral_;
  CostParams costs_;
};

double age_cost_rate(const SystemSpec& s, const CostParams& c, double T, bool deviation);
double periodic_cost_rate(const SystemSpec& s, const CostParams& c, int K, double tau, bool deviation);

}  // namespace copmaint
