#pragma once

#include <span>
#include <vector>

#include "bitvar/matrix.hpp"
#include "bitvar/var_model.hpp"

namespace bitvar {

/// (A_1..A_p, Sigma_E) on an absolute or relative scale.
struct VarParameters {
  std::vector<Matrix> coeff;
  Matrix noise_cov;
};

/// Coefficients identified from correlations alone:
/// a_tilde[s] = D^-1/2 A_s D^1/2 and sigma_tilde = D^-1/2 Sigma_E D^-1/2,
/// D = diag(sigma_i^2).
struct UnscaledEstimate {
  std::vector<Matrix> a_tilde;
  Matrix sigma_tilde;
};

/// r(i, j) = sigma_i / sigma_j.
struct RatioMatrix {
  Matrix r;

  std::size_t dim() const noexcept { return r.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return r(i, j); }
};

RatioMatrix ratios_from_sigmas(std::span<const double> sigmas);
/// max_ij |r_ij r_ji - 1|
double reciprocal_defect(const RatioMatrix& r);

/// Condition-number ceiling for the block system before solving.
inline constexpr double kMaxSystemCondition = 1e10;

/// Builds (G(1) .. G(p) G(0)) and the d(p+1) block matrix whose column block
/// tau < p+1 stacks G(tau - s) over s = 1..p above a zero block, and whose
/// last column block stacks G(s)^T over I. Lags are read from `lags[0..p]`.
struct BlockSystem {
  Matrix rhs;     // d x d(p+1)
  Matrix system;  // d(p+1) x d(p+1)
};
BlockSystem assemble_block_system(std::span<const Matrix> lags, std::size_t p);

/// (A_1..A_p, Sigma_E) from covariances Gamma(0..p). Throws kSingularSystem.
VarParameters solve_covariance_system(const MomentSet& moments, std::size_t p);

/// The same system on correlations R(0..p). Throws kSingularSystem.
UnscaledEstimate solve_correlation_system(const MomentSet& moments,
                                          std::size_t p);

/// a_ij = r_ij a~_ij per lag and s_ij = r_i1 r_j1 s~_ij; the noise is
/// therefore expressed in units of sigma_1^2.
VarParameters rescale(const UnscaledEstimate& u, const RatioMatrix& r);

/// Gamma_hat(tau) = 1/(T - tau) sum_{t >= tau} z(t) z(t - tau)^T for
/// tau = 0..max_lag, using the known zero mean.
std::vector<Matrix> empirical_covariances(const Matrix& traj, std::size_t max_lag);

/// Yule-Walker least squares on the raw trajectory.
VarParameters mlse_continuous(const Matrix& traj, std::size_t p);

}  // namespace bitvar
