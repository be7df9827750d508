#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "bitvar/quantize.hpp"
#include "bitvar/var_model.hpp"
#include "bitvar/yule_walker.hpp"

namespace bitvar {

enum class ThresholdFlag {
  kOk,
  kAllZero,    // no sample reached the threshold: eta_hat = +inf
  kAllOne,     // eta_hat = -inf
  kExactHalf,  // eta_hat = 0, the rescaling divides by zero
};

const char* to_string(ThresholdFlag f) noexcept;

struct ThresholdEstimate {
  std::vector<double> eta_hat;
  std::vector<ThresholdFlag> flags;

  bool ok() const;
};

/// eta_hat_i = -Phi^-1(mean of x(i, .)). Degenerate means are flagged, not
/// thrown. Requires thresholds on the record.
ThresholdEstimate estimate_thresholds(const BinaryRecord& rec);

/// Sum of the empirical covariances of the 1s and of the 0s at lag tau:
///   match_fraction(i, j, tau) - Xi Xj - (1 - Xi)(1 - Xj)
/// with full-sample means Xi, Xj.
double binary_cross_moment(const BinaryRecord& rec, std::size_t i,
                           std::size_t j, std::size_t tau);

/// Correlations are clamped to [-1 + eps, 1 - eps] before the solve.
inline constexpr double kCorrelationClamp = 1e-7;

struct CorrelationEstimate {
  MomentSet moments;              // corr only
  std::size_t clamped_count = 0;  // entries whose Psi target was unreachable
};

/// R_hat(tau)(i, j) = Psi^-1_{eta_i, eta_j}(binary_cross_moment / 2) for
/// tau = 0..max_lag; the lag-0 diagonal is 1.
CorrelationEstimate estimate_correlations_s1(const BinaryRecord& rec,
                                             const std::vector<double>& eta_hat,
                                             std::size_t max_lag);

struct Scheme1Result {
  ThresholdEstimate thresholds;
  std::vector<double> sigma_hat;  // c_i / eta_hat_i
  CorrelationEstimate correlations;
  std::optional<UnscaledEstimate> unscaled;
  std::optional<RatioMatrix> ratios;
  std::optional<VarParameters> model;  // absolute scale

  bool failed() const { return !model.has_value(); }
};

/// Thresholds, correlations, Yule-Walker on correlations, then rescaling by
/// r_ij = (c_i / c_j)(eta_j / eta_i) and s_ij = c_i c_j / (eta_i eta_j) s~_ij.
/// Any threshold flag leaves the model empty.
Scheme1Result estimate_model_s1(const BinaryRecord& rec, std::size_t p);

/// 1 - T exp(-eta^2 / 2) / (eta sqrt(2 pi)); a lower bound on the chance
/// that some series never crosses its threshold. May be negative.
double failure_lower_bound(double eta_max, std::size_t T);

}  // namespace bitvar
