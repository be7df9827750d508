#include "bitvar/scheme1.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bitvar/error.hpp"
#include "bitvar/gaussian.hpp"

namespace bitvar {

const char* to_string(ThresholdFlag f) noexcept {
  switch (f) {
    case ThresholdFlag::kOk: return "ok";
    case ThresholdFlag::kAllZero: return "all_zero";
    case ThresholdFlag::kAllOne: return "all_one";
    case ThresholdFlag::kExactHalf: return "exact_half";
  }
  return "unknown";
}

bool ThresholdEstimate::ok() const {
  return std::all_of(flags.begin(), flags.end(),
                     [](ThresholdFlag f) { return f == ThresholdFlag::kOk; });
}

ThresholdEstimate estimate_thresholds(const BinaryRecord& rec) {
  if (!rec.thresholds) {
    throw Error(ErrorCode::kInvalidArgument,
                "estimate_thresholds: record carries no thresholds");
  }
  constexpr double inf = std::numeric_limits<double>::infinity();
  ThresholdEstimate out;
  for (std::size_t i = 0; i < rec.d; ++i) {
    const double mean = bit_mean(rec, i);
    if (mean == 0.0) {
      out.eta_hat.push_back(inf);
      out.flags.push_back(ThresholdFlag::kAllZero);
    } else if (mean == 1.0) {
      out.eta_hat.push_back(-inf);
      out.flags.push_back(ThresholdFlag::kAllOne);
    } else if (mean == 0.5) {
      out.eta_hat.push_back(0.0);
      out.flags.push_back(ThresholdFlag::kExactHalf);
    } else {
      out.eta_hat.push_back(-std_normal_quantile(mean));
      out.flags.push_back(ThresholdFlag::kOk);
    }
  }
  return out;
}

double binary_cross_moment(const BinaryRecord& rec, std::size_t i,
                           std::size_t j, std::size_t tau) {
  const double xi = bit_mean(rec, i);
  const double xj = bit_mean(rec, j);
  return match_fraction(rec, i, j, tau) - xi * xj - (1.0 - xi) * (1.0 - xj);
}

CorrelationEstimate estimate_correlations_s1(const BinaryRecord& rec,
                                             const std::vector<double>& eta_hat,
                                             std::size_t max_lag) {
  if (eta_hat.size() != rec.d) {
    throw Error(ErrorCode::kInvalidArgument,
                "estimate_correlations_s1: one threshold per series required");
  }
  const std::size_t d = rec.d;
  CorrelationEstimate out;
  for (std::size_t tau = 0; tau <= max_lag; ++tau) {
    Matrix r(d, d);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        if (tau == 0 && i == j) {
          r(i, j) = 1.0;
          continue;
        }
        if (tau == 0 && j < i) {
          r(i, j) = r(j, i);
          continue;
        }
        const double v = 0.5 * binary_cross_moment(rec, i, j, tau);
        const PsiInverse inv = psi_inverse({eta_hat[i], eta_hat[j]}, v);
        out.clamped_count += inv.clamped ? 1 : 0;
        r(i, j) = std::clamp(inv.rho, -1.0 + kCorrelationClamp,
                             1.0 - kCorrelationClamp);
      }
    }
    out.moments.corr.push_back(std::move(r));
  }
  return out;
}

Scheme1Result estimate_model_s1(const BinaryRecord& rec, std::size_t p) {
  Scheme1Result out;
  out.thresholds = estimate_thresholds(rec);
  if (!out.thresholds.ok()) return out;

  const std::vector<double>& c = *rec.thresholds;
  const std::vector<double>& eta = out.thresholds.eta_hat;
  for (std::size_t i = 0; i < rec.d; ++i) out.sigma_hat.push_back(c[i] / eta[i]);

  out.correlations = estimate_correlations_s1(rec, eta, p);
  out.unscaled = solve_correlation_system(out.correlations.moments, p);

  // sigma_hat may carry either sign here; the ratio formula is applied as is.
  out.ratios = ratios_from_sigmas(out.sigma_hat);
  VarParameters model;
  for (const Matrix& a : out.unscaled->a_tilde) {
    model.coeff.push_back(hadamard(out.ratios->r, a));
  }
  model.noise_cov = Matrix(rec.d, rec.d);
  for (std::size_t i = 0; i < rec.d; ++i) {
    for (std::size_t j = 0; j < rec.d; ++j) {
      model.noise_cov(i, j) =
          out.sigma_hat[i] * out.sigma_hat[j] * out.unscaled->sigma_tilde(i, j);
    }
  }
  out.model = std::move(model);
  return out;
}

double failure_lower_bound(double eta_max, std::size_t T) {
  if (!(eta_max > 0.0)) {
    throw Error(ErrorCode::kDomainError, "failure_lower_bound: eta_max <= 0");
  }
  return 1.0 - static_cast<double>(T) * std::exp(-0.5 * eta_max * eta_max) /
                   (eta_max * std::sqrt(2.0 * std::numbers::pi));
}

}  // namespace bitvar
