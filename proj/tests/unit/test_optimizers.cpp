#include <doctest.h>

#include <cmath>
#include <vector>

#include "copmaint/errors.hpp"
#include "copmaint/optimizers.hpp"

using namespace copmaint;

namespace {

SystemSpec weibull_gh(Topology t, int n, double theta, double lambda = 0.4, double alpha = 2.5) {
  return SystemSpec(t, std::vector<LifetimeModel>(n, LifetimeModel::weibull(lambda, alpha)),
                    CopulaModel::gumbel_hougaard(theta, n));
}

SystemSpec exp_gh(int n, double theta) {
  return SystemSpec(Topology::Series, std::vector<LifetimeModel>(n, LifetimeModel::exponential(1.0)),
                    CopulaModel::gumbel_hougaard(theta, n));
}

}  // namespace

TEST_SUITE("optimizers") {
  TEST_CASE("condition report") {
    auto r = check_conditions(weibull_gh(Topology::Series, 4, 2.0), CostParams::uniform(100, 5, 4), false);
    CHECK(r.all_ifr());
    CHECK(r.monotonicity.passed());
    CHECK(r.threshold == ThresholdVerdict::TriviallyInfiniteHazard);
    CHECK(r.passed());

    // Exponential GH series: h(inf) mu = 1 against c_f / (c_f - sum c_p) = 100/90.
    r = check_conditions(exp_gh(4, 2.0), CostParams::uniform(100, 2.5, 4), false);
    CHECK(r.threshold == ThresholdVerdict::No);
    CHECK(r.threshold_lhs == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.threshold_rhs == doctest::Approx(100.0 / 90.0));
    CHECK_FALSE(r.passed());

    r = check_conditions(exp_gh(4, 2.0), CostParams::uniform(100, 2.5, 4, 2, 1), true);
    CHECK(r.threshold == ThresholdVerdict::NotRequired);
    CHECK(r.passed());

    const SystemSpec dec(Topology::Series, {LifetimeModel::weibull(1.0, 0.7), LifetimeModel::weibull(1.0, 2.0)},
                         CopulaModel::independence(2));
    r = check_conditions(dec, CostParams::uniform(100, 5, 2), true);
    CHECK(r.components_ifr == std::vector<bool>{false, true});
    CHECK_FALSE(r.passed());
  }

  TEST_CASE("residual near zero and at a published optimum") {
    const CostParams c = CostParams::uniform(100, 5, 4);
    const CostModel s(weibull_gh(Topology::Series, 4, 2.0), c);
    CHECK(first_order_residual(s, 1e-9, false) == doctest::Approx(1.0 - 100.0 / 80.0).epsilon(1e-6));
    CHECK(std::abs(first_order_residual(s, 0.9341, false)) <= 1e-3 * s.mttf());
    const CostModel p(weibull_gh(Topology::Parallel, 4, 2.0), c);
    CHECK(first_order_residual(p, 1e-9, false) < 0.0);
    CHECK(first_order_residual(p, 1e-9, false) == doctest::Approx(-20.0 / 80.0).epsilon(1e-6));
    CHECK_THROWS_AS(first_order_residual(s, 0.0, false), DomainError);
  }

  TEST_CASE("age optimum: published rows") {
    auto r = optimize_age(weibull_gh(Topology::Series, 2, 2.0), CostParams::uniform(100, 5, 2), false);
    CHECK(r.T == doctest::Approx(0.7717).epsilon(1e-3 / 0.7717));
    CHECK(r.cost_rate == doctest::Approx(21.8277).epsilon(1e-3 / 21.8277));
    CHECK(r.uniqueness_guaranteed);
    r = optimize_age(weibull_gh(Topology::Parallel, 4, 2.0), CostParams::uniform(100, 5, 4, 10, 5), true);
    CHECK(r.T == doctest::Approx(1.7581).epsilon(1e-3 / 1.7581));
    CHECK(r.cost_rate == doctest::Approx(20.2180).epsilon(1e-3 / 20.2180));
    r = optimize_age(weibull_gh(Topology::Series, 4, 1.0), CostParams::uniform(100, 5, 4), false);
    CHECK(r.T == doctest::Approx(0.7080).epsilon(1e-3 / 0.7080));
    CHECK(r.cost_rate == doctest::Approx(48.2220).epsilon(1e-3 / 48.2220));
  }

  TEST_CASE("result invariants") {
    for (Topology t : {Topology::Series, Topology::Parallel})
      for (bool dev : {false, true}) {
        const CostModel m(weibull_gh(t, 3, 2.0), CostParams::uniform(100, 5, 3, 2, 1));
        const auto r = optimize_age(m, dev);
        CHECK(r.cost_rate == m.age_cost_rate(r.T, dev));
        CHECK(r.trace.bracket_lo <= r.T);
        CHECK(r.T <= r.trace.bracket_hi);
        CHECK(std::abs(r.trace.residual) <= 1e-6);
        CHECK(r.trace.notes.empty());
        CHECK(r.cost_rate == doctest::Approx(m.optimum_identity(r.T, dev)).epsilon(1e-6));
        // Neighbours are no cheaper.
        CHECK(m.age_cost_rate(r.T * 0.999, dev) >= r.cost_rate);
        CHECK(m.age_cost_rate(r.T * 1.001, dev) >= r.cost_rate);
      }
  }

  TEST_CASE("residual is increasing when the conditions hold") {
    for (Topology t : {Topology::Series, Topology::Parallel}) {
      const CostModel m(weibull_gh(t, 5, 4.0), CostParams::uniform(100, 5, 5, 10, 5));
      for (bool dev : {false, true}) {
        double prev = -INFINITY;
        for (double T = 0.05; T < 4.0; T *= 1.05) {
          const double r = first_order_residual(m, T, dev);
          CHECK(r > prev);
          prev = r;
        }
      }
    }
  }

  TEST_CASE("never replace when the cost rate keeps falling") {
    const CostParams c = CostParams::uniform(100, 2.5, 4);
    try {
      optimize_age(exp_gh(4, 2.0), c, false);
      FAIL("expected NoInteriorOptimum");
    } catch (const NoInteriorOptimum& e) {
      CHECK(e.boundary() == NoInteriorOptimum::Boundary::DecreasingToInfinity);
    }
    CHECK_THROWS_AS(optimize_periodic(exp_gh(4, 2.0), c, 0.1, false), NoFiniteOptimum);
    // Deviation costs restore a finite optimum.
    const auto r = optimize_age(exp_gh(4, 2.0), CostParams::uniform(100, 2.5, 4, 10, 5), true);
    CHECK(std::isfinite(r.T));
    CHECK(r.uniqueness_guaranteed);
  }

  TEST_CASE("unverified conditions still optimize") {
    const SystemSpec s(Topology::Series, {LifetimeModel::weibull(0.4, 2.5), LifetimeModel::weibull(0.5, 2.0)},
                       CopulaModel::fgm(0.5, 2));
    const auto r = optimize_age(s, CostParams::uniform(100, 5, 2), false);
    CHECK_FALSE(r.uniqueness_guaranteed);
    CHECK_FALSE(r.conditions.monotonicity.passed());
    CHECK(r.T > 0.0);
  }

  TEST_CASE("periodic optimum: published rows") {
    auto r = optimize_periodic(weibull_gh(Topology::Series, 2, 2.0), CostParams::uniform(100, 5, 2), 0.1, false);
    CHECK(r.K == 8);
    CHECK(r.cost_rate == doctest::Approx(21.8480).epsilon(1e-3 / 21.8480));
    CHECK(r.trace.predicates_agree);
    r = optimize_periodic(weibull_gh(Topology::Parallel, 8, 2.0), CostParams::uniform(100, 5, 8, 10, 5), 0.1, true);
    CHECK(r.K == 23);
    CHECK(r.cost_rate == doctest::Approx(25.0994).epsilon(1e-3 / 25.0994));
    CHECK(r.trace.predicates_agree);
  }

  TEST_CASE("periodic search properties") {
    for (Topology t : {Topology::Series, Topology::Parallel})
      for (bool dev : {false, true}) {
        const CostModel m(weibull_gh(t, 4, 2.0), CostParams::uniform(100, 5, 4, 10, 5));
        const auto age = optimize_age(m, dev);
        const auto per = optimize_periodic(m, 0.1, dev);
        CHECK(per.trace.predicates_agree);
        CHECK(per.cost_rate >= age.cost_rate - 1e-9);
        CHECK(std::abs(per.K * 0.1 - age.T) <= 0.1);
        CHECK(m.periodic_cost_rate(per.K + 1, 0.1, dev) >= per.cost_rate);
        if (per.K > 1) CHECK(m.periodic_cost_rate(per.K - 1, 0.1, dev) > per.cost_rate);
        // A period equal to the continuous optimum puts it on the lattice.
        const auto one = optimize_periodic(m, age.T, dev);
        CHECK(one.K == 1);
        CHECK(one.cost_rate == doctest::Approx(age.cost_rate).epsilon(1e-12));
      }
    CHECK_THROWS_AS(optimize_periodic(weibull_gh(Topology::Series, 2, 2.0), CostParams::uniform(100, 5, 2), 0.0, false),
                    ParameterError);
  }

  TEST_CASE("deviation costs never shorten the optimum") {
    for (Topology t : {Topology::Series, Topology::Parallel})
      for (int n = 2; n <= 8; ++n) {
        const auto s = weibull_gh(t, n, 2.0);
        double prev = 0.0;
        for (auto [d1, d2] : {std::pair{0.0, 0.0}, std::pair{2.0, 1.0}, std::pair{10.0, 5.0}}) {
          const auto r = optimize_age(s, CostParams::uniform(100, 5, n, d1, d2), d1 > 0.0);
          CHECK(r.T >= prev);
          prev = r.T;
        }
      }
  }
}
