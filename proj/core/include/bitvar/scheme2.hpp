#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "bitvar/quantize.hpp"
#include "bitvar/var_model.hpp"
#include "bitvar/yule_walker.hpp"

namespace bitvar {

enum class RatioVariant {
  kSimple,     // one predominance measurement per ratio
  kOptimized,  // least-squares sigma from all ratios (smallest eigenvector)
  kEfficient,  // chained through series 0: r_ij = r_i0 / r_j0
  kLogLeastSquares,  // least squares on log ratios
};

const char* to_string(RatioVariant v) noexcept;
/// Accepts "simple", "optimized", "efficient", "log".
RatioVariant parse_ratio_variant(std::string_view name);

/// lambda_hat_ij(tau): fraction of agreeing sign bits x(i, t), x(j, t - tau).
double transition_mle(const BinaryRecord& rec, std::size_t i, std::size_t j,
                      std::size_t tau);

/// R_hat(tau) = sin(pi (lambda_hat - 1/2)) for tau = 0..max_lag; the lag-0
/// diagonal is 1 and lag 0 is symmetric.
MomentSet estimate_correlations_s2(const BinaryRecord& rec, std::size_t max_lag);

struct RatioEstimate {
  RatioMatrix ratios;
  std::size_t clamped_count = 0;  // predominance means pushed off 0 or 1
};

/// Measured edges (i < j) use the predominance inverse with Q_bar clamped to
/// [1/(2T), 1 - 1/(2T)] and the lag-0 correlation; the reverse direction is
/// the reciprocal. Pairs off the graph are chained along a shortest path.
RatioEstimate estimate_ratios_simple(const BinaryRecord& rec,
                                     const MomentSet& corr_hat);

/// The symmetric matrix of l(s) = sum_ij (s_i - r_ij s_j)^2:
/// a_ii = (d - 2) + sum_k r_ki^2 and a_ij = -(r_ij + r_ji).
Matrix ratio_loss_matrix(const RatioMatrix& r);
double ratio_loss(const RatioMatrix& r, std::span<const double> sigma);

/// r_ij = s_i / s_j with s the unit eigenvector of the smallest eigenvalue of
/// ratio_loss_matrix, oriented so its largest-magnitude entry is positive.
RatioMatrix estimate_ratios_optimized(const RatioMatrix& simple);

/// r_ij = r_i0 / r_j0. Throws kMissingEdge unless the record measured every
/// pair (0, j).
RatioMatrix estimate_ratios_efficient(const BinaryRecord& rec,
                                      const RatioMatrix& simple);

/// theta_i = sum_j (L_ij - L_ji) / (2d), L = log r; r_ij = exp(theta_i - theta_j).
RatioMatrix estimate_ratios_log_ls(const RatioMatrix& simple);

struct Scheme2Result {
  MomentSet corr_hat;
  RatioMatrix simple_ratios;
  RatioMatrix ratios;  // those of the chosen variant
  UnscaledEstimate unscaled;
  VarParameters parameters;  // noise in units of sigma_1^2
  ModelClass model_class;    // noise normalized to trace d
  RatioVariant variant = RatioVariant::kSimple;
  std::size_t clamped_count = 0;
};

Scheme2Result estimate_model_s2(const BinaryRecord& rec, std::size_t p,
                                RatioVariant variant = RatioVariant::kSimple);

/// Variance of a product of independent estimates a~ and r:
///   Var(a~) Var(r) + Var(a~) E(r)^2 + Var(r) a~^2.
double predict_variance_indep(double tilde_a, double var_tilde, double var_r,
                              double mean_r);

struct ChainVariance {
  double first_order = 0.0;  // sigma_r^2 r_ij^2 sum_l r_{k_l, k_l-1}^2
  double exact = 0.0;        // prod (sigma_r^2 + r_l^2) - prod r_l^2
};

/// Variance of a ratio chained along a path whose edge ratios are
/// r_{k_l-1, k_l}, each estimated independently with variance sigma_r2.
ChainVariance predict_ratio_variance_chain(std::span<const double> path_ratios,
                                           double sigma_r2);

}  // namespace bitvar
