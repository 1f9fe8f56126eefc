#pragma once

// Independent reference computations for the unit and acceptance tests.
// Nothing here calls into the library's quadrature or copula kernels.

#include <cmath>
#include <functional>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracle {

using hp = boost::multiprecision::cpp_bin_float_50;

/// Composite Simpson rule with m (even) subintervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int m = 4000) {
  if (m % 2) ++m;
  const double h = (b - a) / m;
  double s = f(a) + f(b);
  for (int i = 1; i < m; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

/// Central difference of f at x with step h.
inline double central(const std::function<double(double)>& f, double x, double h = 1e-5) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Gumbel-Hougaard copula in 50-digit arithmetic.
template <class It>
inline double gh_cdf(It first, It last, double theta) {
  hp s = 0;
  for (auto it = first; it != last; ++it) s += pow(-log(hp(*it)), hp(theta));
  return static_cast<double>(exp(-pow(s, 1 / hp(theta))));
}

/// Weibull survival exp(-(lambda t)^alpha) in 50-digit arithmetic.
inline hp weibull_survival(double lambda, double alpha, double t) {
  return exp(-pow(hp(lambda) * hp(t), hp(alpha)));
}

/// Survival of a homogeneous Gumbel-Hougaard Weibull system, directly.
inline double gh_weibull_series_survival(int n, double lambda, double alpha, double theta, double t) {
  return std::exp(-std::pow(n, 1.0 / theta) * std::pow(lambda * t, alpha));
}

inline double gh_weibull_parallel_survival(int n, double lambda, double alpha, double theta, double t) {
  const double F = -std::expm1(-std::pow(lambda * t, alpha));
  return -std::expm1(-std::pow(n, 1.0 / theta) * -std::log(F));
}

/// Cost rate written out from its renewal-reward definition, with Simpson
/// integrals of the survival function S on a fine grid.
inline double cost_rate(const std::function<double(double)>& S, bool series, double c_f, double sum_cp, double c_d1,
                        double c_d2, double T, double mttf) {
  const double D = simpson(S, 0.0, T, 20000);
  const double F = 1.0 - S(T);
  double num = series ? c_f - (c_f - sum_cp) * S(T) : sum_cp + (c_f - sum_cp) * F;
  num += c_d1 * (T - D) + c_d2 * (mttf - D);
  return num / D;
}

}  // namespace oracle
