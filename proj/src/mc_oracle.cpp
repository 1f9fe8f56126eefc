#include "copmaint/mc_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "copmaint/errors.hpp"

namespace copmaint {

namespace {

constexpr std::uint64_t kBlockSize = 1 << 16;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double uniform01(Rng& rng) {
  // Open interval (0, 1).
  double u = 0.0;
  do u = std::generate_canonical<double, 53>(rng);
  while (u == 0.0);
  return u;
}

double exponential(Rng& rng) { return -std::log(uniform01(rng)); }

/// Positive stable variable with Laplace transform exp(-s^a), 0 < a < 1
/// (Kanter's representation).
double positive_stable(double a, Rng& rng) {
  const double U = std::numbers::pi * uniform01(rng);
  const double E = exponential(rng);
  return std::sin(a * U) / std::pow(std::sin(U), 1.0 / a) *
         std::pow(std::sin((1.0 - a) * U) / E, (1.0 - a) / a);
}

bool is_two_dim_conditional(const CopulaModel& c) {
  return c.dim() == 2 && (c.family() == CopulaFamily::FGM || c.family() == CopulaFamily::GumbelBarnett ||
                          (c.family() == CopulaFamily::Clayton && c.theta() < 0.0));
}

/// Second coordinate given the first by inverting dC/du(u, .) = w.
double conditional_second(const CopulaModel& c, double u, double w) {
  const double th = c.theta();
  switch (c.family()) {
    case CopulaFamily::FGM: {
      // dC/du = v + a v (1 - v), a = theta (1 - 2u)
      const double a = th * (1.0 - 2.0 * u);
      if (std::abs(a) < 1e-12) return w;
      const double b = 1.0 + a;
      return 2.0 * w / (b + std::sqrt(b * b - 4.0 * a * w));
    }
    case CopulaFamily::Clayton: {
      if (th == -1.0) return 1.0 - u;  // countermonotonic
      const double p = -th / (1.0 + th);
      const double base = (std::pow(w, p) - 1.0) * std::pow(u, -th) + 1.0;
      return std::pow(std::max(base, 0.0), -1.0 / th);
    }
    default: {
      const CopulaArgument first = CopulaArgument::from_value(u);
      double lo = 0.0, hi = 1.0;
      for (int k = 0; k < 80; ++k) {
        const double mid = 0.5 * (lo + hi);
        const CopulaArgument args[2] = {first, CopulaArgument::from_value(mid)};
        (c.partial(args, 0) < w ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
  }
}

/// Draws -ln U_i, which keeps both tails of U_i exact.
void sample_neg_log(const CopulaModel& c, Rng& rng, std::vector<double>& x) {
  const std::size_t n = c.dim();
  x.resize(n);
  if (c.is_independence()) {
    for (auto& v : x) v = exponential(rng);
    return;
  }
  switch (c.family()) {
    case CopulaFamily::GumbelHougaard: {
      const double a = 1.0 / c.theta();
      const double V = positive_stable(a, rng);
      for (auto& v : x) v = std::pow(exponential(rng) / V, a);
      return;
    }
    case CopulaFamily::Clayton:
      if (c.theta() > 0.0) {
        std::gamma_distribution<double> gamma(1.0 / c.theta(), 1.0);
        const double V = gamma(rng);
        for (auto& v : x) v = std::log1p(exponential(rng) / V) / c.theta();
        return;
      }
      break;
    default: break;
  }
  if (is_two_dim_conditional(c)) {
    const double u = uniform01(rng);
    const double v = conditional_second(c, u, uniform01(rng));
    x[0] = -std::log(u);
    x[1] = -std::log(v);
    return;
  }
  throw CapabilityError("sampling not supported for " + std::string(to_string(c.family())) + " copula with theta " +
                        std::to_string(c.theta()) + " in dimension " + std::to_string(n));
}

double lifetime_from_neg_log(const SystemSpec& s, const std::vector<double>& x) {
  const auto& comps = s.components();
  const bool series = s.topology() == Topology::Series;
  double out = series ? std::numeric_limits<double>::infinity() : 0.0;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    // Series: U_i = exp(-H_i(X_i)). Parallel: U_i = 1 - exp(-H_i(X_i)).
    const double H = series ? x[i] : -std::log(-std::expm1(-x[i]));
    const double t = cumulative_hazard_quantile(comps[i], H);
    out = series ? std::min(out, t) : std::max(out, t);
  }
  return out;
}

struct BlockSums {
  double y = 0, l = 0, yy = 0, ll = 0, yl = 0;
};

}  // namespace

bool sampling_supported(const CopulaModel& c) {
  if (c.is_independence() || c.family() == CopulaFamily::GumbelHougaard) return true;
  if (c.family() == CopulaFamily::Clayton && c.theta() > 0.0) return true;
  return is_two_dim_conditional(c);
}

std::vector<double> sample_copula(const CopulaModel& c, Rng& rng) {
  std::vector<double> x;
  sample_neg_log(c, rng, x);
  for (auto& v : x) v = std::exp(-v);
  return x;
}

double sample_system_lifetime(const SystemSpec& s, Rng& rng) {
  std::vector<double> x;
  sample_neg_log(s.copula(), rng, x);
  return lifetime_from_neg_log(s, x);
}

SimEstimate estimate_cost_rate(const SystemSpec& s, const CostParams& c, const SimConfig& cfg) {
  if (cfg.n_cycles < 2) throw ParameterError("simulation: needs at least 2 cycles");
  c.validate(s.size());
  if (!sampling_supported(s.copula())) {
    Rng probe(0);
    sample_copula(s.copula(), probe);  // throws the capability message
  }
  const double T = cfg.policy.replacement_time();
  if (!(T > 0.0)) throw ParameterError("simulation: replacement time must be > 0");
  const bool dev = cfg.policy.deviation;
  const double cp = c.preventive_total();

  const std::uint64_t blocks = (cfg.n_cycles + kBlockSize - 1) / kBlockSize;
  std::vector<BlockSums> sums(blocks);
  auto run_block = [&](std::uint64_t b) {
    Rng rng(splitmix64(cfg.seed ^ splitmix64(b)));
    const std::uint64_t count = std::min(kBlockSize, cfg.n_cycles - b * kBlockSize);
    std::vector<double> x;
    BlockSums acc;
    for (std::uint64_t k = 0; k < count; ++k) {
      sample_neg_log(s.copula(), rng, x);
      const double X = lifetime_from_neg_log(s, x);
      const double len = std::min(X, T);
      double cost = X > T ? cp : c.c_f;
      if (dev) cost += c.c_d1 * std::max(T - X, 0.0) + c.c_d2 * std::max(X - T, 0.0);
      acc.y += cost;
      acc.l += len;
      acc.yy += cost * cost;
      acc.ll += len * len;
      acc.yl += cost * len;
    }
    sums[b] = acc;
  };

  unsigned workers = cfg.workers ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, blocks));
  if (workers <= 1) {
    for (std::uint64_t b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::uint64_t b = w; b < blocks; b += workers) run_block(b);
      });
    for (auto& t : pool) t.join();
  }

  BlockSums tot;
  for (const auto& b : sums) {
    tot.y += b.y;
    tot.l += b.l;
    tot.yy += b.yy;
    tot.ll += b.ll;
    tot.yl += b.yl;
  }
  const double m = static_cast<double>(cfg.n_cycles);
  const double ybar = tot.y / m;
  const double lbar = tot.l / m;
  const double R = ybar / lbar;
  const double syy = (tot.yy - m * ybar * ybar) / (m - 1.0);
  const double sll = (tot.ll - m * lbar * lbar) / (m - 1.0);
  const double syl = (tot.yl - m * ybar * lbar) / (m - 1.0);
  const double var = (syy - 2.0 * R * syl + R * R * sll) / (m * lbar * lbar);
  return SimEstimate{R, std::sqrt(std::max(var, 0.0)), cfg.n_cycles};
}

}  // namespace copmaint
