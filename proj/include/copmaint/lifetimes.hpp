#pragma once

#include <string_view>

namespace copmaint {

enum class LifetimeFamily { Exponential, Weibull };

std::string_view to_string(LifetimeFamily f);

/// Parametric component lifetime with cdf F(t) = 1 - exp(-(rate * t)^shape).
///
/// The exponential family is the Weibull family with shape fixed at 1; it is
/// kept as a separate tag so that closed forms (constant hazard) can be
/// recognised downstream.
class LifetimeModel {
public:
  static LifetimeModel exponential(double rate);
  static LifetimeModel weibull(double rate, double shape);

  LifetimeFamily family() const noexcept { return family_; }
  double rate() const noexcept { return rate_; }
  double shape() const noexcept { return shape_; }

  /// (rate * t)^shape, the cumulative hazard. All other functions derive
  /// from it so that tails stay accurate.
  double cumulative_hazard(double t) const;

  friend bool operator==(const LifetimeModel&, const LifetimeModel&) = default;

private:
  LifetimeModel(LifetimeFamily f, double rate, double shape);

  LifetimeFamily family_;
  double rate_;
  double shape_;
};

double cdf(const LifetimeModel& m, double t);
double survival(const LifetimeModel& m, double t);
double pdf(const LifetimeModel& m, double t);
double hazard(const LifetimeModel& m, double t);

/// Time at which the survival function equals `s`, for s in (0, 1].
double survival_quantile(const LifetimeModel& m, double s);

/// Time at which the cumulative hazard equals `h` (h >= 0).
double cumulative_hazard_quantile(const LifetimeModel& m, double h);

/// Hazard nondecreasing in t. Constant hazard counts as IFR.
bool is_ifr(const LifetimeModel& m) noexcept;

}  // namespace copmaint
