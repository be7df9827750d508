#include "bitvar/var_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bitvar/error.hpp"
#include "bitvar/rng.hpp"

namespace bitvar {

VarModel::VarModel(std::vector<Matrix> coeff, Matrix noise_cov)
    : coeff_(std::move(coeff)), noise_cov_(std::move(noise_cov)) {
  if (coeff_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "VarModel: order must be >= 1");
  }
  d_ = coeff_[0].rows();
  if (d_ == 0) throw Error(ErrorCode::kInvalidArgument, "VarModel: d = 0");
  for (const Matrix& a : coeff_) {
    if (a.rows() != d_ || a.cols() != d_) {
      throw Error(ErrorCode::kInvalidArgument,
                  "VarModel: coefficient matrices must all be d x d");
    }
    if (!a.all_finite()) {
      throw Error(ErrorCode::kInvalidArgument, "VarModel: non-finite coefficient");
    }
  }
  if (noise_cov_.rows() != d_ || noise_cov_.cols() != d_ ||
      !noise_cov_.all_finite()) {
    throw Error(ErrorCode::kInvalidArgument, "VarModel: Sigma_E must be d x d");
  }
  for (std::size_t i = 0; i < d_; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(noise_cov_(i, j) - noise_cov_(j, i)) >
          kTolerances.symmetry) {
        throw Error(ErrorCode::kNotSymmetric, "VarModel: Sigma_E not symmetric");
      }
    }
  }
  spectral_radius_ = bitvar::spectral_radius(companion_form(*this).transition);
}

Matrix normalize_trace(const Matrix& s) {
  const double tr = s.trace();
  if (!(tr > 0.0)) {
    throw Error(ErrorCode::kDomainError, "normalize_trace: trace <= 0");
  }
  return s * (static_cast<double>(s.rows()) / tr);
}

ModelClass model_class(const VarModel& m) {
  return {m.coeff(), normalize_trace(m.noise_cov())};
}

MomentSet from_covariances(std::vector<Matrix> gamma) {
  MomentSet out;
  const std::size_t d = gamma.at(0).rows();
  out.sigmas.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    if (!(gamma[0](i, i) > 0.0)) {
      throw Error(ErrorCode::kDomainError,
                  "from_covariances: non-positive variance for series " +
                      std::to_string(i));
    }
    out.sigmas[i] = std::sqrt(gamma[0](i, i));
  }
  out.corr.reserve(gamma.size());
  for (const Matrix& g : gamma) {
    Matrix r(d, d);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        r(i, j) = g(i, j) / (out.sigmas[i] * out.sigmas[j]);
      }
    }
    out.corr.push_back(std::move(r));
  }
  for (std::size_t i = 0; i < d; ++i) out.corr[0](i, i) = 1.0;
  out.gamma = std::move(gamma);
  return out;
}

CompanionForm companion_form(const VarModel& m) {
  const std::size_t d = m.dim();
  const std::size_t p = m.order();
  CompanionForm out{Matrix(d * p, d * p), Matrix(d * p, d * p)};
  for (std::size_t s = 0; s < p; ++s) out.transition.set_block(0, s * d, m.coeff(s));
  for (std::size_t s = 1; s < p; ++s) {
    out.transition.set_block(s * d, (s - 1) * d, Matrix::identity(d));
  }
  out.noise_cov.set_block(0, 0, m.noise_cov());
  return out;
}

MomentSet true_moments(const VarModel& m, std::size_t max_lag) {
  const std::size_t d = m.dim();
  const std::size_t p = m.order();
  const CompanionForm cf = companion_form(m);
  const Matrix big = stationary_covariance(cf.transition, cf.noise_cov);

  // State x(t) = (Z(t), ..., Z(t-p+1)); block (0, k) of E[x x^T] is Gamma(k).
  std::vector<Matrix> gamma;
  gamma.reserve(max_lag + 1);
  for (std::size_t k = 0; k < p && k <= max_lag; ++k) {
    gamma.push_back(big.block(0, k * d, d, d));
  }
  auto lagged = [&](std::ptrdiff_t tau) {
    return tau >= 0 ? gamma[static_cast<std::size_t>(tau)]
                    : gamma[static_cast<std::size_t>(-tau)].transpose();
  };
  for (std::size_t tau = gamma.size(); tau <= max_lag; ++tau) {
    Matrix g(d, d);
    for (std::size_t s = 1; s <= p; ++s) {
      g += m.coeff(s - 1) *
           lagged(static_cast<std::ptrdiff_t>(tau) - static_cast<std::ptrdiff_t>(s));
    }
    gamma.push_back(std::move(g));
  }
  return from_covariances(std::move(gamma));
}

std::size_t default_burn_in(const VarModel& m) {
  const double rho = m.spectral_radius();
  if (!(rho < 1.0)) return 500;
  const double n = std::ceil(10.0 * static_cast<double>(m.order()) / (1.0 - rho));
  return std::max<std::size_t>(500, static_cast<std::size_t>(n));
}

Matrix simulate(const VarModel& m, std::size_t T, std::uint64_t seed,
                std::optional<std::size_t> burn_in) {
  if (!m.stationary()) {
    throw Error(ErrorCode::kNotStationary,
                "simulate: spectral radius " + std::to_string(m.spectral_radius()));
  }
  if (T == 0) throw Error(ErrorCode::kInvalidArgument, "simulate: T = 0");
  const std::size_t d = m.dim();
  const std::size_t p = m.order();
  const std::size_t burn = burn_in.value_or(default_burn_in(m));
  const Matrix chol = cholesky(m.noise_cov());
  NormalRng rng(seed);

  // Ring of the last p states; history[(t - s) % p] holds Z(t - s).
  std::vector<std::vector<double>> history(p, std::vector<double>(d, 0.0));
  std::vector<double> g(d);
  std::vector<double> z(d);
  Matrix out(d, T);
  const std::size_t total = burn + T;
  for (std::size_t t = 0; t < total; ++t) {
    for (std::size_t i = 0; i < d; ++i) g[i] = rng.normal();
    for (std::size_t i = 0; i < d; ++i) {
      double acc = 0.0;
      for (std::size_t k = 0; k <= i; ++k) acc += chol(i, k) * g[k];
      z[i] = acc;
    }
    for (std::size_t s = 1; s <= p; ++s) {
      const std::vector<double>& past = history[(t + p - s) % p];
      const Matrix& a = m.coeff(s - 1);
      for (std::size_t i = 0; i < d; ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k < d; ++k) acc += a(i, k) * past[k];
        z[i] += acc;
      }
    }
    history[t % p] = z;
    if (t >= burn) {
      for (std::size_t i = 0; i < d; ++i) out(i, t - burn) = z[i];
    }
  }
  return out;
}

VarModel random_model(std::size_t d, std::uint64_t seed, SpectralBand band) {
  if (d == 0 || !(band.lo > 0.0 && band.lo < band.hi && band.hi < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "random_model: need d >= 1 and 0 < lo < hi < 1");
  }
  constexpr int kMaxDraws = 100000;
  NormalRng rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  Matrix a(d, d);
  for (int draw = 0; draw < kMaxDraws; ++draw) {
    for (double& v : a.data()) v = scale * rng.normal();
    const double rho = spectral_radius(a);
    if (rho >= band.lo && rho <= band.hi) {
      return VarModel({a}, Matrix::identity(d));
    }
  }
  throw Error(ErrorCode::kGenerationTimeout,
              "random_model: no draw in band after 1e5 attempts");
}

}  // namespace bitvar
