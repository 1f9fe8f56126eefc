#include "copmaint/optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "copmaint/errors.hpp"

namespace copmaint {

std::string_view to_string(ThresholdVerdict v) {
  switch (v) {
    case ThresholdVerdict::Yes: return "yes";
    case ThresholdVerdict::No: return "no";
    case ThresholdVerdict::TriviallyInfiniteHazard: return "trivially-infinite-hazard";
    case ThresholdVerdict::NotRequired: return "not-required";
    case ThresholdVerdict::Undetermined: return "undetermined";
  }
  return "?";
}

bool ConditionReport::all_ifr() const noexcept {
  return std::all_of(components_ifr.begin(), components_ifr.end(), [](bool b) { return b; });
}

bool ConditionReport::passed() const noexcept {
  const bool threshold_ok = threshold == ThresholdVerdict::Yes ||
                            threshold == ThresholdVerdict::TriviallyInfiniteHazard ||
                            threshold == ThresholdVerdict::NotRequired;
  return all_ifr() && monotonicity.passed() && threshold_ok;
}

ConditionReport check_conditions(const SystemSpec& s, const CostParams& c, bool deviation,
                                 const MonotonicityOptions& opt) {
  ConditionReport r;
  for (const auto& m : s.components()) r.components_ifr.push_back(is_ifr(m));
  MonotonicityOptions o = opt;
  o.homogeneous = o.homogeneous || s.homogeneous();
  r.monotonicity = s.topology() == Topology::Series ? check_alpha_decreasing(s.copula(), o)
                                                    : check_eta_increasing(s.copula(), o);
  if (deviation) {
    r.threshold = ThresholdVerdict::NotRequired;
    return r;
  }
  const double cp = c.preventive_total();
  r.threshold_rhs = c.c_f / (c.c_f - cp);
  r.hazard_limit = hazard_limit(s);
  switch (r.hazard_limit.kind) {
    case LimitKind::Infinite:
      r.threshold = ThresholdVerdict::TriviallyInfiniteHazard;
      r.threshold_lhs = std::numeric_limits<double>::infinity();
      break;
    case LimitKind::Finite:
      r.threshold_lhs = r.hazard_limit.value * mttf(s);
      r.threshold = r.threshold_lhs > r.threshold_rhs ? ThresholdVerdict::Yes : ThresholdVerdict::No;
      break;
    case LimitKind::Unknown:
      r.threshold = ThresholdVerdict::Undetermined;
      r.threshold_lhs = std::numeric_limits<double>::quiet_NaN();
      break;
  }
  return r;
}

double first_order_residual(const CostModel& m, double T, bool deviation) {
  if (!(T > 0.0)) throw DomainError("residual: T must be > 0");
  const auto& s = m.system();
  const auto& c = m.costs();
  const double cp = c.preventive_total();
  const double D = m.integral().integral(T);
  const double h = system_hazard(s, T);
  const double S = system_survival(s, T);
  const double F = system_cdf(s, T);
  const bool series = s.topology() == Topology::Series;
  const double Q = series ? h * D + S : h * D - F;
  if (!deviation) return series ? Q - c.c_f / (c.c_f - cp) : Q - cp / (c.c_f - cp);
  const double phi = (F / S) * D - (T - D);
  const double base = series ? c.c_f : cp;
  return (c.c_f - cp) * Q + c.c_d1 * phi - base - c.c_d2 * m.mttf();
}

double first_order_residual(const SystemSpec& s, const CostParams& c, double T, bool deviation) {
  return first_order_residual(CostModel(s, c), T, deviation);
}

namespace {

constexpr double kNegligibleSurvival = 1e-12;

std::optional<double> try_residual(const CostModel& m, double T, bool deviation) {
  try {
    const double r = first_order_residual(m, T, deviation);
    if (std::isnan(r)) return std::nullopt;
    return r;
  } catch (const Error&) {
    return std::nullopt;
  }
}

PolicyResult golden_fallback(const CostModel& m, bool deviation, double lo, double hi, PolicyResult r) {
  // Brent minimization in log T; the residual gave no usable bracket.
  auto cost = [&](double x) { return m.age_cost_rate(std::exp(x), deviation); };
  std::uintmax_t iters = 200;
  const auto [x, fx] = boost::math::tools::brent_find_minima(cost, std::log(lo), std::log(hi), 40, iters);
  const double c_lo = cost(std::log(lo));
  const double c_hi = cost(std::log(hi));
  const double tiny = 1e-12 * std::abs(fx);
  if (std::abs(c_hi - c_lo) <= tiny && std::abs(fx - c_hi) <= tiny)
    throw NoInteriorOptimum("cost rate is flat on the search range", NoInteriorOptimum::Boundary::Flat);
  if (c_hi <= fx + tiny)
    throw NoInteriorOptimum("cost rate decreases toward T = infinity: never replace preventively",
                            NoInteriorOptimum::Boundary::DecreasingToInfinity);
  if (c_lo <= fx + tiny)
    throw NoInteriorOptimum("cost rate increases from T = 0: replace as early as possible",
                            NoInteriorOptimum::Boundary::IncreasingFromZero);
  r.T = std::exp(x);
  r.cost_rate = m.age_cost_rate(r.T, deviation);
  r.trace.method = "brent-minimize";
  r.trace.bracket_lo = lo;
  r.trace.bracket_hi = hi;
  r.trace.iterations = static_cast<int>(iters);
  r.trace.residual = try_residual(m, r.T, deviation).value_or(std::numeric_limits<double>::quiet_NaN());
  r.trace.notes.push_back("first-order residual gave no sign change; minimized the cost rate directly");
  return r;
}

}  // namespace

PolicyResult optimize_age(const CostModel& m, bool deviation, const OptimizerOptions& opt) {
  PolicyResult r;
  r.kind = PolicyKind::Age;
  r.deviation = deviation;
  r.conditions = check_conditions(m.system(), m.costs(), deviation, opt.monotonicity);
  r.uniqueness_guaranteed = r.conditions.passed();

  const double mu = m.mttf();
  const double lo0 = mu / 1024.0;
  const double hi = opt.horizon * mu;
  const double tol = opt.relative_tolerance * mu;

  // Geometric scan for the first negative-to-nonnegative transition.
  std::optional<double> a, b;
  double fa = 0.0, fb = 0.0;
  double t = lo0;
  auto r0 = try_residual(m, t, deviation);
  for (int k = 0; r0 && *r0 >= 0.0 && k < 40; ++k) {
    t *= 0.5;
    r0 = try_residual(m, t, deviation);
  }
  if (r0 && *r0 < 0.0) {
    double prev_t = t;
    double prev_r = *r0;
    for (double x = std::max(t * 2.0, lo0); x <= hi * (1.0 + 1e-12); x *= 2.0) {
      const auto rx = try_residual(m, x, deviation);
      if (!rx) break;
      if (*rx >= 0.0) {
        a = prev_t, b = x, fa = prev_r, fb = *rx;
        break;
      }
      prev_t = x;
      prev_r = *rx;
    }
  }
  if (!a) return golden_fallback(m, deviation, lo0, hi, std::move(r));

  r.trace.bracket_lo = *a;
  r.trace.bracket_hi = *b;
  double root = *b;
  if (fb != 0.0) {
    std::uintmax_t iters = 200;
    auto f = [&](double x) { return first_order_residual(m, x, deviation); };
    auto stop = [tol](double l, double u) { return std::abs(u - l) <= tol; };
    const auto [l, u] = boost::math::tools::toms748_solve(f, *a, *b, fa, fb, stop, iters);
    root = 0.5 * (l + u);
    r.trace.iterations = static_cast<int>(iters);
    if (!stop(l, u)) r.trace.notes.push_back("root refinement hit its iteration cap");
  }
  r.trace.method = "toms748";
  r.T = root;
  r.trace.residual = first_order_residual(m, root, deviation);
  r.cost_rate = m.age_cost_rate(root, deviation);

  const double delta = 1e-3 * root;
  const double slack = 1e-12 * std::abs(r.cost_rate);
  if (m.age_cost_rate(root - delta, deviation) < r.cost_rate - slack ||
      m.age_cost_rate(root + delta, deviation) < r.cost_rate - slack)
    r.trace.notes.push_back("neighbour cost below the stationary point; not a local minimum");
  return r;
}

PolicyResult optimize_age(const SystemSpec& s, const CostParams& c, bool deviation, const OptimizerOptions& opt) {
  return optimize_age(CostModel(s, c), deviation, opt);
}

PolicyResult optimize_periodic(const CostModel& m, double tau, bool deviation, const OptimizerOptions& opt) {
  if (!(tau > 0.0)) throw ParameterError("periodic policy: tau must be > 0");
  PolicyResult r;
  r.kind = PolicyKind::Periodic;
  r.tau = tau;
  r.deviation = deviation;
  r.conditions = check_conditions(m.system(), m.costs(), deviation, opt.monotonicity);
  r.uniqueness_guaranteed = r.conditions.passed();

  const auto& s = m.system();
  const auto& c = m.costs();
  const double cp = c.preventive_total();
  const double mu = m.mttf();
  const bool series = s.topology() == Topology::Series;
  const double cap_d = std::ceil(opt.horizon * mu / tau);
  const long cap = cap_d > 1e7 ? 10000000L : static_cast<long>(cap_d);

  // Closed-form predicate for C((K+1) tau) >= C(K tau), as lhs - rhs.
  auto predicate = [&](long K) {
    const double t0 = K * tau;
    const double t1 = (K + 1) * tau;
    const double D = m.integral().integral(t0);
    const double dD = m.integral().integral(t0, t1);
    double H = 0.0;
    if (series) {
      const double S0 = system_survival(s, t0);
      H = (S0 - system_survival(s, t1)) / dD * D + S0;
    } else {
      const double F0 = system_cdf(s, t0);
      H = (system_cdf(s, t1) - F0) / dD * D - F0;
    }
    if (!deviation) return H - (series ? c.c_f : cp) / (c.c_f - cp);
    const double M = (tau - dD) / dD;
    const double J = M * D - (t0 - D);
    return (c.c_f - cp) * H + c.c_d1 * J - (series ? c.c_f : cp) - c.c_d2 * mu;
  };

  double c_k = m.age_cost_rate(tau, deviation);
  for (long K = 1; K <= cap; ++K) {
    // Past this point every replacement time costs the same as never
    // replacing, to within rounding.
    if (system_survival(s, K * tau) < kNegligibleSurvival) break;
    const double c_next = m.age_cost_rate((K + 1) * tau, deviation);
    const bool direct = c_next >= c_k;
    const double p = predicate(K);
    const bool near_tie = std::abs(c_next - c_k) <= 1e-10 * std::abs(c_k);
    if (direct != (p >= 0.0) && !near_tie) {
      if (r.trace.predicates_agree)
        r.trace.notes.push_back("cost comparison and closed-form predicate disagree at K = " + std::to_string(K));
      r.trace.predicates_agree = false;
    }
    // Within rounding of a tie the difference of two cost rates carries no
    // sign information (e.g. on the asymptote of a never-replace case); the
    // closed-form predicate is then the better-conditioned judge.
    if (near_tie ? p >= 0.0 : direct) {
      r.K = static_cast<int>(K);
      r.T = K * tau;
      r.cost_rate = c_k;
      r.trace.method = "linear-scan";
      r.trace.iterations = static_cast<int>(K);
      r.trace.bracket_lo = K * tau;
      r.trace.bracket_hi = (K + 1) * tau;
      r.trace.residual = p;
      return r;
    }
    c_k = c_next;
  }
  throw NoFiniteOptimum("periodic policy: cost rate still decreasing within " + std::to_string(cap) +
                        " periods or until the system has surely failed; never replace preventively");
}

PolicyResult optimize_periodic(const SystemSpec& s, const CostParams& c, double tau, bool deviation,
                               const OptimizerOptions& opt) {
  return optimize_periodic(CostModel(s, c), tau, deviation, opt);
}

}  // namespace copmaint
