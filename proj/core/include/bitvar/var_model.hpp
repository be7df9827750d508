#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "bitvar/matrix.hpp"

namespace bitvar {

/// Zero-mean Gaussian VAR(d, p):  Z(t) = sum_s A_s Z(t-s) + E(t),
/// E(t) ~ N(0, Sigma_E) i.i.d.
class VarModel {
 public:
  /// Validates shapes and symmetry of Sigma_E; stationarity is computed but
  /// not required here (simulate/true_moments check it).
  VarModel(std::vector<Matrix> coeff, Matrix noise_cov);

  std::size_t dim() const noexcept { return d_; }
  std::size_t order() const noexcept { return coeff_.size(); }
  const std::vector<Matrix>& coeff() const noexcept { return coeff_; }
  const Matrix& coeff(std::size_t s) const { return coeff_.at(s); }
  const Matrix& noise_cov() const noexcept { return noise_cov_; }

  double spectral_radius() const noexcept { return spectral_radius_; }
  bool stationary() const noexcept {
    return spectral_radius_ < 1.0 - kTolerances.stationarity_margin;
  }

 private:
  std::size_t d_ = 0;
  std::vector<Matrix> coeff_;
  Matrix noise_cov_;
  double spectral_radius_ = 0.0;
};

/// Coefficients plus the innovation covariance normalized to trace d: what
/// remains identifiable when the overall scale is lost.
struct ModelClass {
  std::vector<Matrix> coeff;
  Matrix noise_cov_normalized;
};

ModelClass model_class(const VarModel& m);
/// d * S / trace(S)
Matrix normalize_trace(const Matrix& s);

/// Lagged second moments, tau = 0..max_lag, with
/// gamma[tau](i, j) = Cov(Z_i(t), Z_j(t - tau)). Correlation-only sets
/// (estimated from bits) leave gamma and sigmas empty.
struct MomentSet {
  std::vector<Matrix> gamma;
  std::vector<Matrix> corr;
  std::vector<double> sigmas;

  std::size_t max_lag() const noexcept { return corr.size() - 1; }
  std::size_t dim() const noexcept { return corr.empty() ? 0 : corr[0].rows(); }
};

/// Fills corr and sigmas from gamma: R(tau) = D^-1/2 Gamma(tau) D^-1/2.
MomentSet from_covariances(std::vector<Matrix> gamma);

struct CompanionForm {
  Matrix transition;  // dp x dp
  Matrix noise_cov;   // Sigma_E in the top-left block
};

CompanionForm companion_form(const VarModel& m);

/// Exact moments via the stationary covariance of the companion form and the
/// Yule-Walker recurrence beyond lag p-1. Throws kNotStationary.
MomentSet true_moments(const VarModel& m, std::size_t max_lag);

/// max(500, ceil(10 p / (1 - spectral radius)))
std::size_t default_burn_in(const VarModel& m);

/// d x T trajectory (row i is series i) started from zero with the first
/// burn_in samples discarded. Throws kNotStationary.
Matrix simulate(const VarModel& m, std::size_t T, std::uint64_t seed,
                std::optional<std::size_t> burn_in = std::nullopt);

struct SpectralBand {
  double lo = 0.5;
  double hi = 0.85;
};

/// VAR(d, 1) with A_1 entries N(0, 1/d), redrawn until the spectral radius
/// falls in the band; Sigma_E = I. Throws kGenerationTimeout after 1e5 draws.
VarModel random_model(std::size_t d, std::uint64_t seed,
                      SpectralBand band = {});

}  // namespace bitvar
