#include "copmaint/cost_models.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "copmaint/errors.hpp"

namespace copmaint {

CostParams CostParams::uniform(double c_f, double c_p_each, std::size_t n, double c_d1, double c_d2) {
  return CostParams{c_f, std::vector<double>(n, c_p_each), c_d1, c_d2};
}

double CostParams::preventive_total() const { return std::accumulate(c_p.begin(), c_p.end(), 0.0); }

void CostParams::validate(std::size_t n) const {
  if (c_p.size() != n)
    throw ParameterError("costs: expected " + std::to_string(n) + " preventive costs, got " +
                         std::to_string(c_p.size()));
  if (!(c_f > 0.0)) throw ParameterError("costs: c_f must be > 0");
  for (double v : c_p)
    if (!(v >= 0.0)) throw ParameterError("costs: each c_p must be >= 0");
  if (!(preventive_total() < c_f)) throw ParameterError("costs: sum of c_p must be < c_f");
  if (!(c_d1 >= 0.0) || !(c_d2 >= 0.0)) throw ParameterError("costs: c_d1 and c_d2 must be >= 0");
}

double PolicyQuery::replacement_time() const {
  if (kind == PolicyKind::Age) return T;
  if (K < 1) throw ParameterError("policy: K must be >= 1");
  if (!(tau > 0.0)) throw ParameterError("policy: tau must be > 0");
  return K * tau;
}

CostModel::CostModel(SystemSpec system, CostParams costs) : costs_(std::move(costs)) {
  costs_.validate(system.size());
  integral_ = std::make_shared<const SurvivalIntegral>(system);
}

double CostModel::age_cost_rate(double T, bool deviation) const {
  if (!(T >= 0.0)) throw DomainError("cost rate: T must be >= 0");
  const double D = integral_->integral(T);
  if (!(D > 0.0)) throw DivisionError("cost rate: expected cycle length vanishes at T = 0");
  const double cf = costs_.c_f;
  const double cp = costs_.preventive_total();
  const auto& s = system();
  double numerator = 0.0;
  if (s.topology() == Topology::Series)
    numerator = cf - (cf - cp) * system_survival(s, T);
  else
    numerator = cp + (cf - cp) * system_cdf(s, T);
  if (!deviation) return numerator / D;
  numerator += costs_.c_d1 * (T - D) + costs_.c_d2 * integral_->mttf();
  return numerator / D - costs_.c_d2;
}

double CostModel::periodic_cost_rate(int K, double tau, bool deviation) const {
  return age_cost_rate(PolicyQuery::periodic(K, tau, deviation).replacement_time(), deviation);
}

double CostModel::cost_rate(const PolicyQuery& q) const { return age_cost_rate(q.replacement_time(), q.deviation); }

double CostModel::deviation_expected_time(double T) const { return copmaint::deviation_expected_time(*integral_, T); }

double CostModel::optimum_identity(double T, bool deviation) const {
  const auto& s = system();
  const double cp = costs_.preventive_total();
  double v = (costs_.c_f - cp) * system_hazard(s, T);
  if (deviation) v += costs_.c_d1 * system_cdf(s, T) / system_survival(s, T) - costs_.c_d2;
  return v;
}

double age_cost_rate(const SystemSpec& s, const CostParams& c, double T, bool deviation) {
  return CostModel(s, c).age_cost_rate(T, deviation);
}

double periodic_cost_rate(const SystemSpec& s, const CostParams& c, int K, double tau, bool deviation) {
  return CostModel(s, c).periodic_cost_rate(K, tau, deviation);
}

}  // namespace copmaint
