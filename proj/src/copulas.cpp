#include "copmaint/copulas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <thread>

#include "copmaint/errors.hpp"

namespace copmaint {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// exp(-sum_{k != i} x_k), the product of all coordinates but one.
double product_except(std::span<const CopulaArgument> u, std::size_t i) {
  double s = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k)
    if (k != i) s += u[k].neg_log;
  return std::exp(-s);
}

double sum_neg_log(std::span<const CopulaArgument> u) {
  double s = 0.0;
  for (const auto& a : u) s += a.neg_log;
  return s;
}

// (sum x_k^theta)^(1/theta) with x_k = -ln u_k, scaled by the largest x_k so
// that neither tail under- or overflows. share(i) = x_i^theta / sum x_k^theta.
struct GhNorm {
  double scale = 0.0;
  double sum = 0.0;  // sum (x_k / scale)^theta
  double theta = 1.0;

  GhNorm(std::span<const CopulaArgument> u, double th) : theta(th) {
    for (const auto& a : u) scale = std::max(scale, a.neg_log);
    if (scale == 0.0 || !std::isfinite(scale)) return;
    for (const auto& a : u) sum += std::pow(a.neg_log / scale, theta);
  }
  double value() const {
    if (scale == 0.0 || !std::isfinite(scale)) return scale;
    return scale * std::pow(sum, 1.0 / theta);
  }
  double share(double x) const { return std::pow(x / scale, theta) / sum; }
};

std::vector<CopulaArgument> to_arguments(const CopulaModel& c, std::span<const double> u) {
  if (u.size() != c.dim())
    throw DomainError("copula: expected " + std::to_string(c.dim()) + " coordinates, got " +
                      std::to_string(u.size()));
  std::vector<CopulaArgument> out;
  out.reserve(u.size());
  for (double v : u) {
    if (!(v >= 0.0 && v <= 1.0)) throw DomainError("copula: coordinate " + fmt(v) + " outside [0,1]");
    out.push_back(CopulaArgument::from_value(v));
  }
  return out;
}

void require_interior(std::span<const double> u) {
  for (double v : u)
    if (!(v > 0.0 && v < 1.0)) throw BoundaryError("copula: derivative needs interior point, got " + fmt(v));
}

}  // namespace

std::string_view to_string(CopulaFamily f) {
  switch (f) {
    case CopulaFamily::Independence: return "independence";
    case CopulaFamily::GumbelHougaard: return "gumbel-hougaard";
    case CopulaFamily::Clayton: return "clayton";
    case CopulaFamily::FGM: return "fgm";
    case CopulaFamily::GumbelBarnett: return "gumbel-barnett";
  }
  return "?";
}

std::string_view to_string(MonotonicityVerdict v) {
  switch (v) {
    case MonotonicityVerdict::AnalyticPass: return "analytic-pass";
    case MonotonicityVerdict::AnalyticFail: return "analytic-fail";
    case MonotonicityVerdict::NumericPass: return "numeric-pass";
    case MonotonicityVerdict::NumericFail: return "numeric-fail";
  }
  return "?";
}

CopulaArgument CopulaArgument::from_value(double u) { return {u, 1.0 - u, -std::log(u)}; }

CopulaArgument CopulaArgument::from_neg_log(double x) { return {std::exp(-x), -std::expm1(-x), x}; }

CopulaArgument CopulaArgument::from_neg_log_complement(double x) {
  const double value = -std::expm1(-x);
  const double complement = std::exp(-x);
  const double nl = value < 0.5 ? -std::log(value) : -std::log1p(-complement);
  return {value, complement, nl};
}

CopulaModel::CopulaModel(CopulaFamily family, double theta, std::size_t dim)
    : family_(family), theta_(theta), dim_(dim) {
  if (dim < 1) throw ParameterError("copula: dimension must be >= 1");
  if (family == CopulaFamily::Independence) {
    theta_ = 0.0;
    return;
  }
  if (!std::isfinite(theta)) throw ParameterError("copula: theta must be finite");
  switch (family) {
    case CopulaFamily::GumbelHougaard:
      if (theta < 1.0) throw ParameterError("copula: gumbel-hougaard requires theta >= 1, got " + fmt(theta));
      break;
    case CopulaFamily::Clayton:
      if (theta < -1.0 || theta == 0.0)
        throw ParameterError("copula: clayton requires theta in [-1,0) or (0,inf), got " + fmt(theta));
      break;
    case CopulaFamily::FGM:
      if (theta < -1.0 || theta > 1.0)
        throw ParameterError("copula: fgm requires theta in [-1,1], got " + fmt(theta));
      break;
    case CopulaFamily::GumbelBarnett:
      if (theta < 0.0 || theta > 1.0)
        throw ParameterError("copula: gumbel-barnett requires theta in [0,1], got " + fmt(theta));
      break;
    case CopulaFamily::Independence: break;
  }
}

bool CopulaModel::is_independence() const noexcept {
  switch (family_) {
    case CopulaFamily::Independence: return true;
    case CopulaFamily::GumbelHougaard: return theta_ == 1.0;
    case CopulaFamily::FGM:
    case CopulaFamily::GumbelBarnett: return theta_ == 0.0;
    case CopulaFamily::Clayton: return false;
  }
  return false;
}

// log(sum_k u_k^{-theta} - n + 1), or NaN inside the zero region.
double CopulaModel::clayton_log1p_sum(std::span<const CopulaArgument> u) const {
  double m = -kInf;
  for (const auto& a : u) m = std::max(m, theta_ * a.neg_log);
  if (std::isinf(m) && m > 0.0) return kInf;
  if (m > 30.0) {
    // Large exponents: factor out the maximum to avoid overflow.
    double s = 0.0;
    for (const auto& a : u) s += std::exp(theta_ * a.neg_log - m);
    s -= static_cast<double>(u.size() - 1) * std::exp(-m);
    return m + std::log(s);
  }
  double a = 0.0;
  for (const auto& x : u) a += std::expm1(theta_ * x.neg_log);
  if (a <= -1.0) return std::numeric_limits<double>::quiet_NaN();
  return std::log1p(a);
}

double CopulaModel::cdf(std::span<const CopulaArgument> u) const {
  if (is_independence()) return std::exp(-sum_neg_log(u));
  switch (family_) {
    case CopulaFamily::GumbelHougaard: {
      return std::exp(-GhNorm(u, theta_).value());
    }
    case CopulaFamily::Clayton: {
      const double l = clayton_log1p_sum(u);
      if (std::isnan(l)) return 0.0;
      return std::exp(-l / theta_);
    }
    case CopulaFamily::FGM: {
      double q = 1.0;
      for (const auto& a : u) q *= a.complement;
      return std::exp(-sum_neg_log(u)) * (1.0 + theta_ * q);
    }
    case CopulaFamily::GumbelBarnett: {
      double l = 0.0;
      for (const auto& a : u) l += std::log1p(theta_ * a.neg_log);
      return std::exp(-std::expm1(l) / theta_);
    }
    case CopulaFamily::Independence: break;
  }
  return std::exp(-sum_neg_log(u));
}

double CopulaModel::co_cdf(std::span<const CopulaArgument> u) const {
  if (is_independence()) return -std::expm1(-sum_neg_log(u));
  switch (family_) {
    case CopulaFamily::GumbelHougaard: {
      return -std::expm1(-GhNorm(u, theta_).value());
    }
    case CopulaFamily::Clayton: {
      const double l = clayton_log1p_sum(u);
      if (std::isnan(l)) return 1.0;
      return -std::expm1(-l / theta_);
    }
    case CopulaFamily::FGM: {
      double q = 1.0;
      for (const auto& a : u) q *= a.complement;
      const double sx = sum_neg_log(u);
      return -std::expm1(-sx) - theta_ * std::exp(-sx) * q;
    }
    case CopulaFamily::GumbelBarnett: {
      double l = 0.0;
      for (const auto& a : u) l += std::log1p(theta_ * a.neg_log);
      return -std::expm1(-std::expm1(l) / theta_);
    }
    case CopulaFamily::Independence: break;
  }
  return -std::expm1(-sum_neg_log(u));
}

double CopulaModel::partial(std::span<const CopulaArgument> u, std::size_t i) const {
  if (is_independence()) return product_except(u, i);
  switch (family_) {
    case CopulaFamily::GumbelHougaard: {
      const GhNorm g(u, theta_);
      if (g.scale == 0.0) return 1.0;
      const double xi = u[i].neg_log;
      return std::exp(xi - g.value()) * std::pow(g.share(xi), 1.0 - 1.0 / theta_);
    }
    case CopulaFamily::Clayton: {
      const double l = clayton_log1p_sum(u);
      if (std::isnan(l)) throw RegionError("copula: clayton derivative undefined in the zero region");
      return std::exp((-1.0 / theta_ - 1.0) * l + (theta_ + 1.0) * u[i].neg_log);
    }
    case CopulaFamily::FGM: {
      double q = 1.0, q_except = 1.0;
      for (std::size_t k = 0; k < u.size(); ++k) {
        q *= u[k].complement;
        if (k != i) q_except *= u[k].complement;
      }
      const double p_except = product_except(u, i);
      return p_except * (1.0 + theta_ * q) - theta_ * p_except * u[i].value * q_except;
    }
    case CopulaFamily::GumbelBarnett: {
      double l = 0.0;
      for (const auto& a : u) l += std::log1p(theta_ * a.neg_log);
      const double li = std::log1p(theta_ * u[i].neg_log);
      return std::exp(-std::expm1(l) / theta_ + u[i].neg_log + l - li);
    }
    case CopulaFamily::Independence: break;
  }
  return product_except(u, i);
}

double CopulaModel::elasticity(std::span<const CopulaArgument> u, std::size_t i) const {
  if (is_independence()) {
    if (!std::isfinite(sum_neg_log(u))) throw DivisionError("copula: alpha undefined where H(u) = 0");
    return 1.0;
  }
  switch (family_) {
    case CopulaFamily::GumbelHougaard: {
      const GhNorm g(u, theta_);
      if (!std::isfinite(g.scale)) throw DivisionError("copula: alpha undefined where H(u) = 0");
      if (g.scale == 0.0) return 1.0;
      return std::pow(g.share(u[i].neg_log), 1.0 - 1.0 / theta_);
    }
    case CopulaFamily::Clayton: {
      const double l = clayton_log1p_sum(u);
      if (std::isnan(l) || !std::isfinite(l)) throw DivisionError("copula: alpha undefined where H(u) = 0");
      return std::exp(theta_ * u[i].neg_log - l);
    }
    case CopulaFamily::FGM: {
      double q = 1.0, q_except = 1.0;
      for (std::size_t k = 0; k < u.size(); ++k) {
        q *= u[k].complement;
        if (k != i) q_except *= u[k].complement;
      }
      const double base = 1.0 + theta_ * q;
      if (base == 0.0 || !std::isfinite(sum_neg_log(u)))
        throw DivisionError("copula: alpha undefined where H(u) = 0");
      return 1.0 - theta_ * q_except * u[i].value / base;
    }
    case CopulaFamily::GumbelBarnett: {
      double l = 0.0;
      for (const auto& a : u) l += std::log1p(theta_ * a.neg_log);
      if (!std::isfinite(l)) throw DivisionError("copula: alpha undefined where H(u) = 0");
      return std::exp(l - std::log1p(theta_ * u[i].neg_log));
    }
    case CopulaFamily::Independence: break;
  }
  return 1.0;
}

double CopulaModel::co_elasticity(std::span<const CopulaArgument> u, std::size_t i) const {
  const double denom = co_cdf(u);
  if (!(denom > 0.0)) throw DivisionError("copula: eta undefined where C(u) = 1");
  return u[i].complement * partial(u, i) / denom;
}

double copula_cdf(const CopulaModel& c, std::span<const double> u) {
  const auto args = to_arguments(c, u);
  return c.cdf(args);
}

double survival_copula_value(const CopulaModel& c, std::span<const double> ubar) {
  const auto args = to_arguments(c, ubar);
  return c.cdf(args);
}

double partial_derivative(const CopulaModel& c, std::span<const double> u, std::size_t i) {
  const auto args = to_arguments(c, u);
  require_interior(u);
  if (i >= c.dim()) throw DomainError("copula: index out of range");
  return c.partial(args, i);
}

double alpha_i(const CopulaModel& c, std::span<const double> u, std::size_t i) {
  const auto args = to_arguments(c, u);
  require_interior(u);
  if (i >= c.dim()) throw DomainError("copula: index out of range");
  return c.elasticity(args, i);
}

double eta_i(const CopulaModel& c, std::span<const double> u, std::size_t i) {
  const auto args = to_arguments(c, u);
  require_interior(u);
  if (i >= c.dim()) throw DomainError("copula: index out of range");
  return c.co_elasticity(args, i);
}

double alpha_homogeneous(const CopulaModel& c, double u) {
  const std::vector<double> v(c.dim(), u);
  double s = 0.0;
  for (std::size_t i = 0; i < c.dim(); ++i) s += alpha_i(c, v, i);
  return s;
}

double eta_homogeneous(const CopulaModel& c, double u) {
  const std::vector<double> v(c.dim(), u);
  double s = 0.0;
  for (std::size_t i = 0; i < c.dim(); ++i) s += eta_i(c, v, i);
  return s;
}

namespace {

enum class Direction { Decreasing, Increasing };

// All n diagnostic values at one point, or nullopt where undefined.
using Evaluator = std::optional<std::vector<double>> (*)(const CopulaModel&, std::span<const CopulaArgument>);

std::optional<std::vector<double>> eval_alpha(const CopulaModel& c, std::span<const CopulaArgument> u) {
  std::vector<double> out(c.dim());
  try {
    for (std::size_t i = 0; i < c.dim(); ++i) out[i] = c.elasticity(u, i);
  } catch (const Error&) {
    return std::nullopt;
  }
  return out;
}

std::optional<std::vector<double>> eval_eta(const CopulaModel& c, std::span<const CopulaArgument> u) {
  std::vector<double> out(c.dim());
  try {
    for (std::size_t i = 0; i < c.dim(); ++i) out[i] = c.co_elasticity(u, i);
  } catch (const Error&) {
    return std::nullopt;
  }
  return out;
}

double step_violation(Direction d, double before, double after) {
  return d == Direction::Decreasing ? after - before : before - after;
}

double diagonal_violation(const CopulaModel& c, const std::vector<double>& grid, Direction d, Evaluator eval) {
  double worst = 0.0;
  std::optional<double> prev;
  for (double g : grid) {
    const std::vector<CopulaArgument> u(c.dim(), CopulaArgument::from_value(g));
    const auto v = eval(c, u);
    if (!v) {
      prev.reset();
      continue;
    }
    double sum = 0.0;
    for (double x : *v) sum += x;
    if (prev) worst = std::max(worst, step_violation(d, *prev, sum));
    prev = sum;
  }
  return worst;
}

double sliced_violation(const CopulaModel& c, const std::vector<double>& grid, Direction d, Evaluator eval,
                        std::size_t begin, std::size_t end) {
  const std::size_t n = c.dim();
  const std::size_t m = std::min<std::size_t>(n, 3);
  const std::size_t r = grid.size();
  const double h = 1.0 / static_cast<double>(r);
  double worst = 0.0;
  std::vector<double> u(n);
  std::vector<CopulaArgument> args(n);
  for (std::size_t b = begin; b < end; ++b) {
    std::size_t code = b;
    std::vector<double> base(m);
    for (std::size_t j = 0; j < m; ++j) {
      base[j] = grid[code % r];
      code /= r;
    }
    for (std::size_t j = 0; j < n; ++j) {
      u[j] = base[j % m];
      args[j] = CopulaArgument::from_value(u[j]);
    }
    const auto v0 = eval(c, args);
    if (!v0) continue;
    for (std::size_t l = 0; l < n; ++l) {
      const double moved = u[l] + h;
      if (moved >= 1.0) continue;
      const CopulaArgument saved = args[l];
      args[l] = CopulaArgument::from_value(moved);
      const auto v1 = eval(c, args);
      args[l] = saved;
      if (!v1) continue;
      for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, step_violation(d, (*v0)[i], (*v1)[i]));
    }
  }
  return worst;
}

MonotonicityReport grid_check(const CopulaModel& c, const MonotonicityOptions& opt, Direction d, Evaluator eval) {
  if (opt.resolution < 2) throw ParameterError("monotonicity: resolution must be >= 2");
  const auto r = static_cast<std::size_t>(opt.resolution);
  std::vector<double> grid(r);
  for (std::size_t k = 0; k < r; ++k) grid[k] = (static_cast<double>(k) + 0.5) / static_cast<double>(r);

  double worst = diagonal_violation(c, grid, d, eval);
  std::string where = "diagonal slice";
  if (!opt.homogeneous) {
    const std::size_t m = std::min<std::size_t>(c.dim(), 3);
    std::size_t total = 1;
    for (std::size_t j = 0; j < m; ++j) total *= r;
    const unsigned workers = std::max(1u, std::min<unsigned>(opt.workers, static_cast<unsigned>(total)));
    std::vector<double> partial(workers, 0.0);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t lo = total * w / workers, hi = total * (w + 1) / workers;
      auto job = [&, w, lo, hi] { partial[w] = sliced_violation(c, grid, d, eval, lo, hi); };
      if (workers == 1)
        job();
      else
        pool.emplace_back(job);
    }
    for (auto& t : pool) t.join();
    for (double p : partial) worst = std::max(worst, p);
    where = "coordinate-sliced grid";
  }
  MonotonicityReport rep;
  rep.grid_resolution = opt.resolution;
  rep.worst_violation = worst;
  rep.verdict = worst <= opt.tolerance ? MonotonicityVerdict::NumericPass : MonotonicityVerdict::NumericFail;
  rep.rationale = where + " at resolution " + std::to_string(opt.resolution) + ", worst violation " + fmt(worst);
  return rep;
}

MonotonicityReport analytic(MonotonicityVerdict v, std::string why) {
  MonotonicityReport rep;
  rep.verdict = v;
  rep.rationale = std::move(why);
  return rep;
}

}  // namespace

MonotonicityReport grid_check_alpha_decreasing(const CopulaModel& c, const MonotonicityOptions& opt) {
  return grid_check(c, opt, Direction::Decreasing, &eval_alpha);
}

MonotonicityReport grid_check_eta_increasing(const CopulaModel& c, const MonotonicityOptions& opt) {
  return grid_check(c, opt, Direction::Increasing, &eval_eta);
}

MonotonicityReport check_alpha_decreasing(const CopulaModel& c, const MonotonicityOptions& opt) {
  using V = MonotonicityVerdict;
  const double t = c.theta();
  if (c.is_independence()) return analytic(V::AnalyticPass, "independence: alpha_i = 1");
  switch (c.family()) {
    case CopulaFamily::GumbelBarnett:
      return analytic(V::AnalyticPass, "gumbel-barnett with theta in [0,1]");
    case CopulaFamily::Clayton:
      if (t < 0.0) return analytic(V::AnalyticPass, "clayton with theta in [-1,0)");
      break;
    case CopulaFamily::FGM:
      return analytic(V::AnalyticFail, "fgm qualifies only at theta = 0");
    case CopulaFamily::GumbelHougaard:
      if (opt.homogeneous) return analytic(V::AnalyticPass, "gumbel-hougaard, homogeneous: alpha(u) = n^(1/theta)");
      break;
    case CopulaFamily::Independence: break;
  }
  return grid_check_alpha_decreasing(c, opt);
}

MonotonicityReport check_eta_increasing(const CopulaModel& c, const MonotonicityOptions& opt) {
  using V = MonotonicityVerdict;
  const double t = c.theta();
  if (c.is_independence()) return analytic(V::AnalyticPass, "independence");
  switch (c.family()) {
    case CopulaFamily::GumbelHougaard:
      return analytic(V::AnalyticPass, "gumbel-hougaard with theta >= 1");
    case CopulaFamily::Clayton:
      if (t > 0.0 && t <= 1.0) return analytic(V::AnalyticPass, "clayton with theta in (0,1]");
      if (t < 0.0 && opt.homogeneous) return analytic(V::AnalyticPass, "clayton with theta in [-1,0), homogeneous");
      break;
    default: break;
  }
  return grid_check_eta_increasing(c, opt);
}

}  // namespace copmaint
