#include "copmaint/lifetimes.hpp"

#include <cmath>
#include <string>

#include "copmaint/errors.hpp"

namespace copmaint {

namespace {

void require_time(double t) {
  if (!(t >= 0.0)) throw DomainError("lifetime: time must be >= 0, got " + std::to_string(t));
}

}  // namespace

std::string_view to_string(LifetimeFamily f) {
  switch (f) {
    case LifetimeFamily::Exponential: return "exponential";
    case LifetimeFamily::Weibull: return "weibull";
  }
  return "?";
}

LifetimeModel::LifetimeModel(LifetimeFamily f, double rate, double shape)
    : family_(f), rate_(rate), shape_(shape) {
  if (!(rate > 0.0) || !std::isfinite(rate))
    throw ParameterError("lifetime: rate lambda must be > 0, got " + std::to_string(rate));
  if (!(shape > 0.0) || !std::isfinite(shape))
    throw ParameterError("lifetime: shape alpha must be > 0, got " + std::to_string(shape));
}

LifetimeModel LifetimeModel::exponential(double rate) {
  return LifetimeModel(LifetimeFamily::Exponential, rate, 1.0);
}

LifetimeModel LifetimeModel::weibull(double rate, double shape) {
  return LifetimeModel(LifetimeFamily::Weibull, rate, shape);
}

double LifetimeModel::cumulative_hazard(double t) const {
  require_time(t);
  const double x = rate_ * t;
  return shape_ == 1.0 ? x : std::pow(x, shape_);
}

double cdf(const LifetimeModel& m, double t) { return -std::expm1(-m.cumulative_hazard(t)); }

double survival(const LifetimeModel& m, double t) { return std::exp(-m.cumulative_hazard(t)); }

double hazard(const LifetimeModel& m, double t) {
  require_time(t);
  if (m.shape() == 1.0) return m.rate();
  if (t == 0.0) {
    if (m.shape() < 1.0) throw SingularityError("lifetime: Weibull hazard is infinite at t=0 for shape < 1");
    return 0.0;
  }
  return m.shape() * m.rate() * std::pow(m.rate() * t, m.shape() - 1.0);
}

double pdf(const LifetimeModel& m, double t) { return hazard(m, t) * survival(m, t); }

double cumulative_hazard_quantile(const LifetimeModel& m, double h) {
  if (!(h >= 0.0)) throw DomainError("lifetime: cumulative hazard must be >= 0");
  return std::pow(h, 1.0 / m.shape()) / m.rate();
}

double survival_quantile(const LifetimeModel& m, double s) {
  if (!(s > 0.0 && s <= 1.0)) throw DomainError("lifetime: survival level must lie in (0, 1]");
  return cumulative_hazard_quantile(m, -std::log(s));
}

bool is_ifr(const LifetimeModel& m) noexcept { return m.shape() >= 1.0; }

}  // namespace copmaint
