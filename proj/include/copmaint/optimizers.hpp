#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "copmaint/copulas.hpp"
#include "copmaint/cost_models.hpp"
#include "copmaint/systems.hpp"

namespace copmaint {

enum class ThresholdVerdict {
  Yes,
  No,
  TriviallyInfiniteHazard,
  NotRequired,  // deviation models need no threshold
  Undetermined  // limiting hazard could not be decided numerically
};

std::string_view to_string(ThresholdVerdict v);

/// Sufficient conditions for a finite, unique optimum.
struct ConditionReport {
  std::vector<bool> components_ifr;
  /// alpha-decreasing for series systems, eta-increasing for parallel ones.
  MonotonicityReport monotonicity;
  ThresholdVerdict threshold = ThresholdVerdict::NotRequired;
  double threshold_lhs = 0.0;  // h(inf) * MTTF; plain models only
  double threshold_rhs = 0.0;  // c_f / (c_f - sum c_p); plain models only
  HazardLimit hazard_limit;

  bool all_ifr() const noexcept;
  /// IFR components, the monotonicity check and (plain models) the threshold.
  bool passed() const noexcept;
};

ConditionReport check_conditions(const SystemSpec& s, const CostParams& c, bool deviation,
                                 const MonotonicityOptions& opt = {});

/// Left-minus-right of the first-order condition at T > 0. Increasing in T
/// whenever the conditions hold; the optimum is its unique zero.
double first_order_residual(const CostModel& m, double T, bool deviation);
double first_order_residual(const SystemSpec& s, const CostParams& c, double T, bool deviation);

struct MethodTrace {
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int iterations = 0;
  double residual = 0.0;
  std::string method;
  /// Periodic search: direct cost comparison and the closed-form predicate
  /// gave the same answer at every K visited.
  bool predicates_agree = true;
  std::vector<std::string> notes;
};

struct PolicyResult {
  PolicyKind kind = PolicyKind::Age;
  double T = 0.0;  // T* (age) or K* * tau (periodic)
  int K = 0;       // periodic only
  double tau = 0.0;
  bool deviation = false;
  double cost_rate = 0.0;
  ConditionReport conditions;
  bool uniqueness_guaranteed = false;
  MethodTrace trace;
};

struct OptimizerOptions {
  /// Root tolerance on T relative to MTTF.
  double relative_tolerance = 1e-8;
  /// Upper end of the search in multiples of MTTF.
  double horizon = 1e3;
  MonotonicityOptions monotonicity{};
};

/// Minimizes the age-policy cost rate by bracketing the sign change of the
/// first-order residual on a ratio-2 grid from MTTF/1024 and refining with
/// TOMS 748. Falls back to Brent minimization of the cost rate when the
/// residual never changes sign; throws NoInteriorOptimum when that finds no
/// interior minimum either.
PolicyResult optimize_age(const CostModel& m, bool deviation, const OptimizerOptions& opt = {});
PolicyResult optimize_age(const SystemSpec& s, const CostParams& c, bool deviation,
                          const OptimizerOptions& opt = {});

/// Smallest K >= 1 with C((K+1) tau) >= C(K tau). Throws NoFiniteOptimum past
/// K = ceil(horizon * MTTF / tau).
PolicyResult optimize_periodic(const CostModel& m, double tau, bool deviation, const OptimizerOptions& opt = {});
PolicyResult optimize_periodic(const SystemSpec& s, const CostParams& c, double tau, bool deviation,
                               const OptimizerOptions& opt = {});

}  // namespace copmaint
