#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace copmaint {

enum class CopulaFamily { Independence, GumbelHougaard, Clayton, FGM, GumbelBarnett };

std::string_view to_string(CopulaFamily f);

/// One coordinate of a copula argument carried as (u, 1 - u, -ln u).
///
/// System-level code builds these from cumulative hazards so that both the
/// u -> 0 and u -> 1 ends keep full relative precision; the public
/// vector-of-probabilities entry points build them from plain values.
struct CopulaArgument {
  double value;       // u
  double complement;  // 1 - u
  double neg_log;     // -ln u

  static CopulaArgument from_value(double u);
  /// u = exp(-x), exact in both tails.
  static CopulaArgument from_neg_log(double x);
  /// u = 1 - exp(-x), exact in both tails.
  static CopulaArgument from_neg_log_complement(double x);
};

/// A copula family with its dependence parameter and dimension.
///
/// Admissible parameters:
///   GumbelHougaard  theta >= 1
///   Clayton         theta in [-1, 0) or (0, inf)
///   FGM             theta in [-1, 1]
///   GumbelBarnett   theta in [0, 1]  (generator ln(1 - theta ln t))
///   Independence    theta ignored
///
/// The survival copula of each family is taken to have the same parametric
/// form as the distributional copula; series systems apply it to component
/// survival functions directly.
class CopulaModel {
public:
  CopulaModel(CopulaFamily family, double theta, std::size_t dim);

  static CopulaModel independence(std::size_t dim) { return {CopulaFamily::Independence, 0.0, dim}; }
  static CopulaModel gumbel_hougaard(double theta, std::size_t dim) {
    return {CopulaFamily::GumbelHougaard, theta, dim};
  }
  static CopulaModel clayton(double theta, std::size_t dim) { return {CopulaFamily::Clayton, theta, dim}; }
  static CopulaModel fgm(double theta, std::size_t dim) { return {CopulaFamily::FGM, theta, dim}; }
  static CopulaModel gumbel_barnett(double theta, std::size_t dim) {
    return {CopulaFamily::GumbelBarnett, theta, dim};
  }

  CopulaFamily family() const noexcept { return family_; }
  double theta() const noexcept { return theta_; }
  std::size_t dim() const noexcept { return dim_; }

  /// True when the model reduces to the product copula.
  bool is_independence() const noexcept;

  // Kernels. Arguments must have size dim(); no domain checks beyond that.
  double cdf(std::span<const CopulaArgument> u) const;
  /// 1 - C(u), computed without cancellation near the upper corner.
  double co_cdf(std::span<const CopulaArgument> u) const;
  /// dC/du_i. Throws RegionError inside the Clayton zero region.
  double partial(std::span<const CopulaArgument> u, std::size_t i) const;
  /// u_i * dC/du_i / C(u). Throws RegionError where C vanishes.
  double elasticity(std::span<const CopulaArgument> u, std::size_t i) const;
  /// (1 - u_i) * dC/du_i / (1 - C(u)). Throws DivisionError where C = 1.
  double co_elasticity(std::span<const CopulaArgument> u, std::size_t i) const;

  friend bool operator==(const CopulaModel&, const CopulaModel&) = default;

private:
  double clayton_log1p_sum(std::span<const CopulaArgument> u) const;

  CopulaFamily family_;
  double theta_;
  std::size_t dim_;
};

// Entry points over plain probability vectors. Indices are zero-based.

double copula_cdf(const CopulaModel& c, std::span<const double> u);
double survival_copula_value(const CopulaModel& c, std::span<const double> ubar);
double partial_derivative(const CopulaModel& c, std::span<const double> u, std::size_t i);

/// u_i * dH/du_i / H with H the survival copula (series domination function).
double alpha_i(const CopulaModel& c, std::span<const double> u, std::size_t i);

/// (1 - u_i) * dC/du_i / (1 - C(u)), the parallel domination diagnostic.
/// Writing H(1-u) = 1 - C(u), the derivative of H in its i-th argument is
/// dC/du_i, which makes the value nonnegative.
double eta_i(const CopulaModel& c, std::span<const double> u, std::size_t i);

/// Diagnostics of the diagonal domination function h(u) = H(u, ..., u) used
/// for homogeneous components: u h'(u) / h(u) and (1 - u) h'(u) / (1 - h(u)),
/// i.e. the sums of alpha_i and eta_i along the diagonal.
double alpha_homogeneous(const CopulaModel& c, double u);
double eta_homogeneous(const CopulaModel& c, double u);

enum class MonotonicityVerdict { AnalyticPass, AnalyticFail, NumericPass, NumericFail };

std::string_view to_string(MonotonicityVerdict v);

struct MonotonicityReport {
  MonotonicityVerdict verdict;
  int grid_resolution = 0;       // 0 for analytic verdicts
  double worst_violation = 0.0;  // largest step in the forbidden direction
  std::string rationale;

  bool passed() const noexcept {
    return verdict == MonotonicityVerdict::AnalyticPass || verdict == MonotonicityVerdict::NumericPass;
  }
};

struct MonotonicityOptions {
  int resolution = 25;
  double tolerance = 1e-9;
  /// Components share one marginal; only the diagonal matters.
  bool homogeneous = false;
  unsigned workers = 1;
};

/// Whether every alpha_i is decreasing on (0,1)^n.
///
/// Known families are decided analytically; the rest fall back to a grid of
/// resolution^min(n,3) base points with forward differences of step
/// 1/resolution along every coordinate, plus the diagonal slice.
MonotonicityReport check_alpha_decreasing(const CopulaModel& c, const MonotonicityOptions& opt = {});

/// Whether every eta_i is increasing on (0,1)^n. Same strategy as above.
MonotonicityReport check_eta_increasing(const CopulaModel& c, const MonotonicityOptions& opt = {});

/// Grid check without the analytic shortcuts; exposed for cross-checking.
MonotonicityReport grid_check_alpha_decreasing(const CopulaModel& c, const MonotonicityOptions& opt = {});
MonotonicityReport grid_check_eta_increasing(const CopulaModel& c, const MonotonicityOptions& opt = {});

}  // namespace copmaint
