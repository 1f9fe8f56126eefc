#include "copmaint/systems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "copmaint/errors.hpp"

namespace copmaint {

namespace {

constexpr double kSurvivalCutoff = 1e-12;
constexpr double kDensityTol = 1e-14;
constexpr unsigned kMaxDepth = 60;
constexpr double kMttfAbsTol = 1e-8;

std::vector<CopulaArgument> survival_arguments(const SystemSpec& s, double t) {
  std::vector<CopulaArgument> args;
  args.reserve(s.size());
  for (const auto& m : s.components()) args.push_back(CopulaArgument::from_neg_log(m.cumulative_hazard(t)));
  return args;
}

std::vector<CopulaArgument> cdf_arguments(const SystemSpec& s, double t) {
  std::vector<CopulaArgument> args;
  args.reserve(s.size());
  for (const auto& m : s.components())
    args.push_back(CopulaArgument::from_neg_log_complement(m.cumulative_hazard(t)));
  return args;
}

// One 15-point Gauss-Kronrod rule; error scaled to the interval.
template <class F>
double gk15(F& f, double a, double b, double* err) {
  using boost::math::quadrature::gauss_kronrod;
  double e = 0.0;
  const double v = gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &e);
  *err = e * 0.5 * (b - a);
  return v;
}

template <class F>
double adapt(F& f, double a, double b, double whole, unsigned depth, double* err) {
  double e = 0.0;
  const double v = gk15(f, a, b, &e);
  // Absolute tolerance proportional to the interval keeps the total below
  // kDensityTol * (b - a) of the caller's range.
  if (depth == 0 || e <= kDensityTol * (b - a) || (b - a) <= whole * 1e-15) {
    *err = e;
    return v;
  }
  const double m = 0.5 * (a + b);
  double e1 = 0.0, e2 = 0.0;
  const double v1 = adapt(f, a, m, whole, depth - 1, &e1);
  const double v2 = adapt(f, m, b, whole, depth - 1, &e2);
  *err = e1 + e2;
  return v1 + v2;
}

template <class F>
double gauss_kronrod(F&& f, double a, double b, double* err) {
  double e = 0.0;
  const double v = a == b ? 0.0 : adapt(f, a, b, b - a, kMaxDepth, &e);
  if (err) *err = e;
  return v;
}

}  // namespace

std::string_view to_string(Topology t) { return t == Topology::Series ? "series" : "parallel"; }

std::string_view to_string(LimitKind k) {
  switch (k) {
    case LimitKind::Finite: return "finite";
    case LimitKind::Infinite: return "infinite";
    case LimitKind::Unknown: return "unknown";
  }
  return "?";
}

SystemSpec::SystemSpec(Topology topology, std::vector<LifetimeModel> components, CopulaModel copula)
    : topology_(topology), components_(std::move(components)), copula_(copula) {
  if (components_.empty()) throw ParameterError("system: needs at least one component");
  if (copula_.dim() != components_.size())
    throw ParameterError("system: copula dimension " + std::to_string(copula_.dim()) + " does not match " +
                         std::to_string(components_.size()) + " components");
}

bool SystemSpec::homogeneous() const noexcept {
  return std::all_of(components_.begin(), components_.end(),
                     [&](const LifetimeModel& m) { return m == components_.front(); });
}

double system_survival(const SystemSpec& s, double t) {
  if (s.topology() == Topology::Series) return s.copula().cdf(survival_arguments(s, t));
  return s.copula().co_cdf(cdf_arguments(s, t));
}

double system_cdf(const SystemSpec& s, double t) {
  if (s.topology() == Topology::Series) return s.copula().co_cdf(survival_arguments(s, t));
  return s.copula().cdf(cdf_arguments(s, t));
}

double system_hazard(const SystemSpec& s, double t) {
  const auto& comps = s.components();
  double h = 0.0;
  if (s.topology() == Topology::Series) {
    const auto args = survival_arguments(s, t);
    for (std::size_t i = 0; i < comps.size(); ++i) {
      const double hi = hazard(comps[i], t);
      if (hi != 0.0) h += s.copula().elasticity(args, i) * hi;
    }
  } else {
    const auto args = cdf_arguments(s, t);
    for (std::size_t i = 0; i < comps.size(); ++i) {
      const double hi = hazard(comps[i], t);
      if (hi != 0.0) h += s.copula().co_elasticity(args, i) * hi;
    }
  }
  return h;
}

double system_density(const SystemSpec& s, double t) { return system_hazard(s, t) * system_survival(s, t); }

SurvivalIntegral::SurvivalIntegral(const SystemSpec& s, std::size_t panels) : system_(s) {
  if (panels < 1) throw ParameterError("survival integral: needs at least one panel");
  double scale = std::numeric_limits<double>::infinity();
  for (const auto& m : s.components()) scale = std::min(scale, 1.0 / m.rate());
  double T = scale;
  int doublings = 0;
  // Stop once both the survival level and the tail bound S(T) * T are negligible.
  while (system_survival(s, T) >= kSurvivalCutoff || system_survival(s, T) * T > 0.1 * kMttfAbsTol) {
    T *= 2.0;
    if (++doublings > 200) throw NumericError("survival integral: survival does not decay, MTTF diverges");
  }
  t_max_ = T;
  width_ = T / static_cast<double>(panels);
  cumulative_.assign(panels + 1, 0.0);
  auto f = [&s](double t) { return system_survival(s, t); };
  double err_sum = 0.0;
  for (std::size_t k = 0; k < panels; ++k) {
    double err = 0.0;
    const double a = width_ * static_cast<double>(k);
    const double v = gauss_kronrod(f, a, a + width_, &err);
    cumulative_[k + 1] = cumulative_[k] + v;
    err_sum += err;
  }
  const double tail = system_survival(s, t_max_) * t_max_;
  total_ = cumulative_.back();
  error_ = err_sum + tail;
  if (!(error_ <= kMttfAbsTol) || !std::isfinite(total_))
    throw NumericError("survival integral: quadrature did not reach tolerance (error estimate " +
                       std::to_string(error_) + ", t_max " + std::to_string(t_max_) + ")");
}

double SurvivalIntegral::integral(double T) const {
  if (!(T >= 0.0)) throw DomainError("survival integral: upper limit must be >= 0");
  auto f = [this](double t) { return system_survival(system_, t); };
  if (T >= t_max_) return total_ + (T > t_max_ ? gauss_kronrod(f, t_max_, T, nullptr) : 0.0);
  const auto k = std::min<std::size_t>(static_cast<std::size_t>(T / width_), cumulative_.size() - 2);
  const double a = width_ * static_cast<double>(k);
  return cumulative_[k] + (T > a ? gauss_kronrod(f, a, T, nullptr) : 0.0);
}

double SurvivalIntegral::integral(double a, double b) const {
  if (!(a >= 0.0 && b >= a)) throw DomainError("survival integral: need 0 <= a <= b");
  // Short ranges are integrated directly to avoid cancellation.
  if (b - a <= width_) {
    auto f = [this](double t) { return system_survival(system_, t); };
    return gauss_kronrod(f, a, b, nullptr);
  }
  return integral(b) - integral(a);
}

double mttf(const SystemSpec& s) { return SurvivalIntegral(s).mttf(); }

double deviation_expected_time(const SurvivalIntegral& integral, double T) {
  if (!(T >= 0.0)) throw DomainError("deviation time: T must be >= 0");
  const double below = integral.integral(T);
  // int_0^T (1 - S) + int_T^inf S
  return (T - below) + (integral.mttf() - below);
}

double deviation_expected_time(const SystemSpec& s, double T) {
  return deviation_expected_time(SurvivalIntegral(s), T);
}

namespace {

bool all_exponential(const SystemSpec& s) {
  return std::all_of(s.components().begin(), s.components().end(),
                     [](const LifetimeModel& m) { return m.shape() == 1.0; });
}

bool gh_or_independent(const CopulaModel& c) {
  return c.is_independence() || c.family() == CopulaFamily::GumbelHougaard;
}

HazardLimit numeric_hazard_limit(const SystemSpec& s) {
  HazardLimit out;
  const double start = mttf(s);
  std::vector<double> hs;
  for (int k = 0; k < 60; ++k) {
    const double t = start * std::ldexp(1.0, k);
    double h = 0.0;
    try {
      h = system_hazard(s, t);
    } catch (const Error&) {
      break;
    }
    if (!std::isfinite(h)) break;
    hs.push_back(h);
    if (system_survival(s, t) < 1e-250) break;
  }
  out.note = "geometric grid of " + std::to_string(hs.size()) + " points from MTTF";
  if (hs.size() < 4) return out;
  const std::size_t m = hs.size();
  auto rel = [&](std::size_t j) { return std::abs(hs[j] - hs[j - 1]) / std::max(std::abs(hs[j]), 1e-300); };
  if (rel(m - 1) < 1e-6 && rel(m - 2) < 1e-6) {
    out.kind = LimitKind::Finite;
    out.value = hs.back();
    return out;
  }
  // Steady growth by a bounded-below factor per doubling signals divergence.
  bool growing = true;
  for (std::size_t j = m - 3; j < m; ++j) growing = growing && hs[j] > hs[j - 1] * 1.05;
  if (growing) out.kind = LimitKind::Infinite;
  return out;
}

}  // namespace

HazardLimit hazard_limit(const SystemSpec& s) {
  HazardLimit out;
  const auto& comps = s.components();
  const auto& c = s.copula();
  if (gh_or_independent(c)) {
    if (all_exponential(s)) {
      out.kind = LimitKind::Finite;
      out.analytic = true;
      if (s.topology() == Topology::Series) {
        // Cumulative hazards are linear in t, so each alpha_i is constant.
        const double theta = c.is_independence() ? 1.0 : c.theta();
        double acc = 0.0;
        for (const auto& m : comps) acc += std::pow(m.rate(), theta);
        out.value = std::pow(acc, 1.0 / theta);
        out.note = "constant hazard (sum lambda_i^theta)^(1/theta)";
      } else {
        out.value = std::min_element(comps.begin(), comps.end(), [](auto& a, auto& b) {
                      return a.rate() < b.rate();
                    })->rate();
        out.note = "longest-lived component dominates: min lambda_i";
      }
      return out;
    }
    auto over_one = [](const LifetimeModel& m) { return m.shape() > 1.0; };
    const bool diverges = s.topology() == Topology::Series ? std::any_of(comps.begin(), comps.end(), over_one)
                                                           : std::all_of(comps.begin(), comps.end(), over_one);
    if (diverges) {
      out.kind = LimitKind::Infinite;
      out.analytic = true;
      out.note = "Weibull shape > 1 hazard grows like t^(shape-1)";
      return out;
    }
  }
  return numeric_hazard_limit(s);
}

}  // namespace copmaint
