#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "copmaint/copulas.hpp"
#include "copmaint/cost_models.hpp"
#include "copmaint/systems.hpp"

namespace copmaint {

using Rng = std::mt19937_64;

struct SimConfig {
  std::uint64_t n_cycles = 1000000;
  std::uint64_t seed = 1;
  PolicyQuery policy;
  /// 0 picks std::thread::hardware_concurrency(). Results do not depend on it.
  unsigned workers = 0;
};

struct SimEstimate {
  double cost_rate_mean = 0.0;
  double std_error = 0.0;
  std::uint64_t cycles_run = 0;
};

/// Whether the sampler supports this copula.
///
/// Gumbel-Hougaard uses a positive-stable frailty, Clayton theta > 0 a gamma
/// frailty, independence plain uniforms. FGM, Clayton theta < 0 and
/// Gumbel-Barnett are sampled for n = 2 only, by inverting the conditional
/// distribution of the second coordinate.
bool sampling_supported(const CopulaModel& c);

/// One draw (U_1, ..., U_n) from the copula. Throws CapabilityError when
/// unsupported.
std::vector<double> sample_copula(const CopulaModel& c, Rng& rng);

/// Series: the copula couples survival probabilities and the minimum is
/// returned. Parallel: it couples distribution functions and the maximum is
/// returned.
double sample_system_lifetime(const SystemSpec& s, Rng& rng);

/// Renewal-reward estimate of the cost rate: per cycle the lifetime X is
/// drawn, the cycle lasts min(X, T) and costs sum c_p if X > T, c_f
/// otherwise, plus c_d1 (T - X)+ and c_d2 (X - T)+ with deviation costs.
/// Ratio of means with a delta-method standard error.
///
/// Cycles run in fixed blocks, each with its own generator derived from
/// (seed, block index); block sums are combined in block order, so the
/// estimate is bit-identical for any worker count.
SimEstimate estimate_cost_rate(const SystemSpec& s, const CostParams& c, const SimConfig& cfg);

}  // namespace copmaint
