#include <doctest.h>

#include <cmath>
#include <vector>

#include "copmaint/errors.hpp"
#include "copmaint/systems.hpp"
#include "oracles.hpp"

using namespace copmaint;

namespace {

SystemSpec weibull_gh(Topology t, int n, double theta, double lambda = 0.4, double alpha = 2.5) {
  return SystemSpec(t, std::vector<LifetimeModel>(n, LifetimeModel::weibull(lambda, alpha)),
                    CopulaModel::gumbel_hougaard(theta, n));
}

SystemSpec mixed(Topology t, CopulaModel c) {
  std::vector<LifetimeModel> m{LifetimeModel::weibull(0.4, 2.5), LifetimeModel::weibull(0.7, 1.5),
                               LifetimeModel::exponential(0.3)};
  m.resize(c.dim(), LifetimeModel::weibull(0.5, 2.0));
  return SystemSpec(t, m, c);
}

}  // namespace

TEST_SUITE("systems") {
  TEST_CASE("survival matches the homogeneous closed forms") {
    for (double th : {1.0, 2.0, 6.5}) {
      const auto s = weibull_gh(Topology::Series, 4, th);
      const auto p = weibull_gh(Topology::Parallel, 4, th);
      for (double t : {1e-4, 0.2, 1.0, 3.0, 8.0}) {
        CHECK(system_survival(s, t) == doctest::Approx(oracle::gh_weibull_series_survival(4, 0.4, 2.5, th, t)).epsilon(1e-13));
        CHECK(system_survival(p, t) == doctest::Approx(oracle::gh_weibull_parallel_survival(4, 0.4, 2.5, th, t)).epsilon(1e-12));
        CHECK(system_cdf(s, t) + system_survival(s, t) == doctest::Approx(1.0).epsilon(1e-15));
      }
    }
  }

  TEST_CASE("parallel cdf keeps relative precision at small t") {
    // F_sys = F^(n^(1/theta)) for the homogeneous GH parallel system.
    const auto p = weibull_gh(Topology::Parallel, 4, 2.0);
    for (double t : {1e-3, 1e-2}) {
      const oracle::hp F = 1 - oracle::weibull_survival(0.4, 2.5, t);
      const double expect = static_cast<double>(pow(F, oracle::hp(2)));
      CHECK(system_cdf(p, t) == doctest::Approx(expect).epsilon(1e-12));
    }
  }

  TEST_CASE("MTTF closed forms") {
    const double lam = 0.8;
    auto expo = [&](Topology t, int n, CopulaModel c) {
      return SystemSpec(t, std::vector<LifetimeModel>(n, LifetimeModel::exponential(lam)), c);
    };
    CHECK(mttf(expo(Topology::Series, 3, CopulaModel::independence(3))) == doctest::Approx(1.0 / (3 * lam)).epsilon(1e-10));
    CHECK(mttf(expo(Topology::Series, 4, CopulaModel::gumbel_hougaard(2.0, 4))) ==
          doctest::Approx(1.0 / (lam * 2.0)).epsilon(1e-10));
    CHECK(mttf(expo(Topology::Parallel, 2, CopulaModel::independence(2))) == doctest::Approx(1.5 / lam).epsilon(1e-10));
    // Weibull GH series: Gamma(1 + 1/alpha) / (lambda n^(1/(theta alpha))).
    const double want = std::tgamma(1.4) / (0.4 * std::pow(4.0, 1.0 / (2.0 * 2.5)));
    CHECK(mttf(weibull_gh(Topology::Series, 4, 2.0)) == doctest::Approx(want).epsilon(1e-10));
  }

  TEST_CASE("survival integral against Simpson") {
    for (const auto& s : {weibull_gh(Topology::Series, 3, 2.0), weibull_gh(Topology::Parallel, 5, 4.0),
                          mixed(Topology::Series, CopulaModel::clayton(1.5, 3)),
                          mixed(Topology::Parallel, CopulaModel::fgm(0.5, 2)),
                          mixed(Topology::Parallel, CopulaModel::gumbel_barnett(0.8, 3))}) {
      const SurvivalIntegral I(s);
      auto S = [&](double t) { return system_survival(s, t); };
      for (double T : {0.05, 0.5, 1.3, 4.0}) CHECK(I.integral(T) == doctest::Approx(oracle::simpson(S, 0.0, T)).epsilon(1e-9));
      CHECK(I.mttf() == doctest::Approx(oracle::simpson(S, 0.0, I.t_max(), 200000)).epsilon(1e-8));
      CHECK(I.error_estimate() <= 1e-8);
      CHECK(I.integral(0.7, 2.9) == doctest::Approx(I.integral(2.9) - I.integral(0.7)).epsilon(1e-12));
      double prev = 0.0;
      for (double T = 0.0; T < 2.0 * I.t_max(); T += I.t_max() / 97.0) {
        const double v = I.integral(T);
        CHECK(v >= prev);
        prev = v;
      }
    }
  }

  TEST_CASE("hazard is -d/dt log survival") {
    for (const auto& s : {weibull_gh(Topology::Series, 3, 2.0), weibull_gh(Topology::Parallel, 3, 2.0),
                          mixed(Topology::Series, CopulaModel::clayton(0.7, 3)),
                          mixed(Topology::Parallel, CopulaModel::clayton(2.0, 3)),
                          mixed(Topology::Series, CopulaModel::fgm(-0.5, 2)),
                          mixed(Topology::Parallel, CopulaModel::gumbel_barnett(0.5, 2))}) {
      for (double t : {0.3, 1.0, 2.2}) {
        const double fd = -oracle::central([&](double x) { return std::log(system_survival(s, x)); }, t, 1e-6);
        CHECK(system_hazard(s, t) == doctest::Approx(fd).epsilon(1e-6));
        CHECK(system_density(s, t) == doctest::Approx(system_hazard(s, t) * system_survival(s, t)));
      }
    }
  }

  TEST_CASE("exponential gumbel-hougaard series has constant hazard") {
    for (double th : {1.0, 2.0, 3.5}) {
      const SystemSpec s(Topology::Series, std::vector<LifetimeModel>(5, LifetimeModel::exponential(0.9)),
                         CopulaModel::gumbel_hougaard(th, 5));
      for (double t : {1e-3, 0.1, 1.0, 10.0, 50.0}) CHECK(system_hazard(s, t) == doctest::Approx(0.9 * std::pow(5.0, 1.0 / th)).epsilon(1e-12));
    }
  }

  TEST_CASE("deviation time") {
    const SystemSpec one(Topology::Series, {LifetimeModel::exponential(1.0)}, CopulaModel::independence(1));
    // E|1 - X| for X ~ Exp(1) is 2/e.
    CHECK(deviation_expected_time(one, 1.0) == doctest::Approx(2.0 / std::exp(1.0)).epsilon(1e-10));
    const auto s = weibull_gh(Topology::Series, 4, 2.0);
    const double mu = mttf(s);
    CHECK(deviation_expected_time(s, 0.0) == doctest::Approx(mu).epsilon(1e-12));
    CHECK(deviation_expected_time(s, 10 * mu) == doctest::Approx(9 * mu).epsilon(1e-3));
    CHECK_THROWS_AS(deviation_expected_time(s, -1.0), DomainError);
  }

  TEST_CASE("limiting hazard") {
    const SystemSpec es(Topology::Series, std::vector<LifetimeModel>(4, LifetimeModel::exponential(1.0)),
                        CopulaModel::gumbel_hougaard(2.0, 4));
    auto h = hazard_limit(es);
    CHECK(h.kind == LimitKind::Finite);
    CHECK(h.analytic);
    CHECK(h.value == doctest::Approx(2.0));
    const SystemSpec ep(Topology::Parallel, {LifetimeModel::exponential(1.0), LifetimeModel::exponential(0.4)},
                        CopulaModel::gumbel_hougaard(2.0, 2));
    CHECK(hazard_limit(ep).value == doctest::Approx(0.4));
    CHECK(hazard_limit(weibull_gh(Topology::Series, 2, 2.0)).kind == LimitKind::Infinite);
    // Numeric path: FGM series of Weibull(2) components diverges too.
    CHECK(hazard_limit(mixed(Topology::Series, CopulaModel::fgm(0.5, 2))).kind == LimitKind::Infinite);
  }

  TEST_CASE("construction errors") {
    CHECK_THROWS_AS(SystemSpec(Topology::Series, {}, CopulaModel::independence(1)), ParameterError);
    CHECK_THROWS_AS(SystemSpec(Topology::Series, {LifetimeModel::exponential(1.0)}, CopulaModel::independence(2)),
                    ParameterError);
    CHECK(weibull_gh(Topology::Series, 3, 2.0).homogeneous());
    CHECK_FALSE(mixed(Topology::Series, CopulaModel::independence(3)).homogeneous());
  }
}
