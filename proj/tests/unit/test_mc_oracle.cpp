#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "copmaint/errors.hpp"
#include "copmaint/mc_oracle.hpp"
#include "copmaint/optimizers.hpp"

using namespace copmaint;

namespace {

SystemSpec weibull_gh(Topology t, int n, double theta) {
  return SystemSpec(t, std::vector<LifetimeModel>(n, LifetimeModel::weibull(0.4, 2.5)),
                    CopulaModel::gumbel_hougaard(theta, n));
}

// One-sample Kolmogorov-Smirnov statistic against U(0,1).
double ks_uniform(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  const double m = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) d = std::max({d, (i + 1) / m - x[i], x[i] - i / m});
  return d;
}

}  // namespace

TEST_SUITE("mc_oracle") {
  TEST_CASE("margins are uniform") {
    const int draws = 100000;
    const double critical = 1.628 / std::sqrt(draws);  // 1% level
    for (const auto& c : {CopulaModel::gumbel_hougaard(3.0, 3), CopulaModel::clayton(2.0, 3), CopulaModel::fgm(0.8, 2),
                          CopulaModel::clayton(-0.5, 2), CopulaModel::gumbel_barnett(0.6, 2), CopulaModel::independence(2)}) {
      Rng rng(11);
      std::vector<std::vector<double>> cols(c.dim());
      for (int k = 0; k < draws; ++k) {
        const auto u = sample_copula(c, rng);
        for (std::size_t i = 0; i < u.size(); ++i) cols[i].push_back(u[i]);
      }
      for (const auto& col : cols) CHECK(ks_uniform(col) < critical);
    }
  }

  TEST_CASE("empirical copula matches the cdf") {
    const int draws = 200000;
    for (const auto& c : {CopulaModel::clayton(0.5, 2), CopulaModel::gumbel_hougaard(2.0, 2), CopulaModel::fgm(-0.9, 2),
                          CopulaModel::clayton(-0.7, 2), CopulaModel::gumbel_barnett(1.0, 2)}) {
      Rng rng(5);
      int hits = 0;
      for (int k = 0; k < draws; ++k) {
        const auto u = sample_copula(c, rng);
        hits += u[0] <= 0.5 && u[1] <= 0.4;
      }
      const double p = copula_cdf(c, std::vector<double>{0.5, 0.4});
      const double se = std::sqrt(p * (1 - p) / draws);
      CHECK(std::abs(hits / double(draws) - p) <= 3 * se);
    }
  }

  TEST_CASE("minimum of exponential gumbel-hougaard system is exponential") {
    const SystemSpec s(Topology::Series, std::vector<LifetimeModel>(4, LifetimeModel::exponential(1.0)),
                       CopulaModel::gumbel_hougaard(2.0, 4));
    Rng rng(3);
    const int draws = 100000;
    double sum = 0.0;
    for (int k = 0; k < draws; ++k) sum += sample_system_lifetime(s, rng);
    // Rate 4^(1/2) = 2: mean 1/2 with standard error 1/(2 sqrt(draws)).
    CHECK(std::abs(sum / draws - 0.5) <= 3 * 0.5 / std::sqrt(draws));
  }

  TEST_CASE("independent survival at MTTF") {
    const SystemSpec s(Topology::Series, {LifetimeModel::weibull(0.4, 2.5), LifetimeModel::weibull(0.6, 1.5)},
                       CopulaModel::independence(2));
    const double mu = mttf(s);
    Rng rng(9);
    const int draws = 100000;
    int alive = 0;
    for (int k = 0; k < draws; ++k) alive += sample_system_lifetime(s, rng) > mu;
    const double p = system_survival(s, mu);
    CHECK(std::abs(alive / double(draws) - p) <= 3 * std::sqrt(p * (1 - p) / draws));
  }

  TEST_CASE("cost rate agrees with the analytic value") {
    const auto s = weibull_gh(Topology::Series, 2, 2.0);
    const CostParams c = CostParams::uniform(100, 5, 2);
    SimConfig cfg;
    cfg.n_cycles = 1000000;
    cfg.seed = 42;
    cfg.policy = PolicyQuery::age(0.7717, false);
    const auto e = estimate_cost_rate(s, c, cfg);
    CHECK(e.cycles_run == cfg.n_cycles);
    CHECK(e.std_error > 0.0);
    CHECK(std::abs(e.cost_rate_mean - 21.8277) <= 3 * e.std_error);
  }

  TEST_CASE("deviation costs: single exponential component") {
    const SystemSpec s(Topology::Series, {LifetimeModel::exponential(1.0)}, CopulaModel::independence(1));
    const CostParams c{10.0, {1.0}, 2.0, 1.0};
    SimConfig cfg;
    cfg.n_cycles = 1000000;
    cfg.seed = 8;
    cfg.policy = PolicyQuery::age(1.0, true);
    const auto e = estimate_cost_rate(s, c, cfg);
    CHECK(std::abs(e.cost_rate_mean - CostModel(s, c).age_cost_rate(1.0, true)) <= 3 * e.std_error);
  }

  TEST_CASE("constant cycle cost has no cost noise") {
    // With sum c_p just below c_f the cost per cycle is nearly constant; the
    // estimate then tracks c / E[min(X, T)].
    const auto s = weibull_gh(Topology::Parallel, 2, 2.0);
    const CostParams c = CostParams::uniform(10.0, 4.99999999, 2);
    SimConfig cfg;
    cfg.n_cycles = 400000;
    cfg.policy = PolicyQuery::age(1.2, false);
    const auto e = estimate_cost_rate(s, c, cfg);
    const double analytic = CostModel(s, c).age_cost_rate(1.2, false);
    CHECK(std::abs(e.cost_rate_mean - analytic) <= 3 * e.std_error);
  }

  TEST_CASE("deterministic for a seed and any worker count") {
    const auto s = weibull_gh(Topology::Parallel, 3, 2.0);
    const CostParams c = CostParams::uniform(100, 5, 3, 2, 1);
    SimConfig cfg;
    cfg.n_cycles = 300001;
    cfg.seed = 123;
    cfg.policy = PolicyQuery::periodic(12, 0.1, true);
    cfg.workers = 1;
    const auto a = estimate_cost_rate(s, c, cfg);
    cfg.workers = 3;
    const auto b = estimate_cost_rate(s, c, cfg);
    const auto again = estimate_cost_rate(s, c, cfg);
    CHECK(a.cost_rate_mean == b.cost_rate_mean);
    CHECK(a.std_error == b.std_error);
    CHECK(b.cost_rate_mean == again.cost_rate_mean);
    cfg.seed = 124;
    CHECK(estimate_cost_rate(s, c, cfg).cost_rate_mean != a.cost_rate_mean);
  }

  TEST_CASE("unsupported samplers fail loudly") {
    CHECK_FALSE(sampling_supported(CopulaModel::fgm(0.5, 3)));
    CHECK_FALSE(sampling_supported(CopulaModel::clayton(-0.3, 3)));
    CHECK_FALSE(sampling_supported(CopulaModel::gumbel_barnett(0.5, 3)));
    Rng rng(1);
    CHECK_THROWS_AS(sample_copula(CopulaModel::gumbel_barnett(0.5, 3), rng), CapabilityError);
    const SystemSpec s(Topology::Series, std::vector<LifetimeModel>(3, LifetimeModel::weibull(0.4, 2.5)),
                       CopulaModel::fgm(0.5, 3));
    SimConfig cfg;
    cfg.n_cycles = 10;
    cfg.policy = PolicyQuery::age(1.0, false);
    CHECK_THROWS_AS(estimate_cost_rate(s, CostParams::uniform(100, 5, 3), cfg), CapabilityError);
  }
}
