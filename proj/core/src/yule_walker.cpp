#include "bitvar/yule_walker.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bitvar/error.hpp"

namespace bitvar {
namespace {

Matrix solve_guarded(const BlockSystem& sys) {
  double cond;
  try {
    cond = condition_number(sys.system);
  } catch (const Error& e) {
    throw Error(ErrorCode::kSingularSystem, e.what());
  }
  if (!(cond <= kMaxSystemCondition)) {
    throw Error(ErrorCode::kSingularSystem,
                "block system condition number " + std::to_string(cond));
  }
  try {
    return solve_right(sys.system, sys.rhs);
  } catch (const Error& e) {
    throw Error(ErrorCode::kSingularSystem, e.what());
  }
}

void split_solution(const Matrix& x, std::size_t d, std::size_t p,
                    std::vector<Matrix>& coeff, Matrix& noise) {
  coeff.clear();
  for (std::size_t s = 0; s < p; ++s) coeff.push_back(x.block(0, s * d, d, d));
  noise = x.block(0, p * d, d, d);
  // The solve yields a symmetric Sigma only up to round-off.
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const double m = 0.5 * (noise(i, j) + noise(j, i));
      noise(i, j) = m;
      noise(j, i) = m;
    }
  }
}

void check_lags(std::span<const Matrix> lags, std::size_t p, const char* what) {
  if (p == 0 || lags.size() < p + 1) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + ": need lags 0..p with p >= 1");
  }
}

}  // namespace

RatioMatrix ratios_from_sigmas(std::span<const double> sigmas) {
  const std::size_t d = sigmas.size();
  RatioMatrix out{Matrix(d, d)};
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) out.r(i, j) = sigmas[i] / sigmas[j];
  }
  return out;
}

double reciprocal_defect(const RatioMatrix& r) {
  double worst = 0.0;
  for (std::size_t i = 0; i < r.dim(); ++i) {
    for (std::size_t j = 0; j < r.dim(); ++j) {
      worst = std::max(worst, std::abs(r(i, j) * r(j, i) - 1.0));
    }
  }
  return worst;
}

BlockSystem assemble_block_system(std::span<const Matrix> lags, std::size_t p) {
  check_lags(lags, p, "assemble_block_system");
  const std::size_t d = lags[0].rows();
  const std::size_t n = d * (p + 1);
  BlockSystem sys{Matrix(d, n), Matrix(n, n)};
  for (std::size_t tau = 1; tau <= p; ++tau) sys.rhs.set_block(0, (tau - 1) * d, lags[tau]);
  sys.rhs.set_block(0, p * d, lags[0]);

  for (std::size_t s = 1; s <= p; ++s) {
    for (std::size_t tau = 1; tau <= p; ++tau) {
      const Matrix block = tau >= s ? lags[tau - s] : lags[s - tau].transpose();
      sys.system.set_block((s - 1) * d, (tau - 1) * d, block);
    }
    sys.system.set_block((s - 1) * d, p * d, lags[s].transpose());
  }
  sys.system.set_block(p * d, p * d, Matrix::identity(d));
  return sys;
}

VarParameters solve_covariance_system(const MomentSet& moments, std::size_t p) {
  check_lags(moments.gamma, p, "solve_covariance_system");
  const std::size_t d = moments.gamma[0].rows();
  const Matrix x = solve_guarded(assemble_block_system(moments.gamma, p));
  VarParameters out;
  split_solution(x, d, p, out.coeff, out.noise_cov);
  return out;
}

UnscaledEstimate solve_correlation_system(const MomentSet& moments,
                                          std::size_t p) {
  check_lags(moments.corr, p, "solve_correlation_system");
  const std::size_t d = moments.corr[0].rows();
  const Matrix x = solve_guarded(assemble_block_system(moments.corr, p));
  UnscaledEstimate out;
  split_solution(x, d, p, out.a_tilde, out.sigma_tilde);
  return out;
}

VarParameters rescale(const UnscaledEstimate& u, const RatioMatrix& r) {
  const std::size_t d = u.sigma_tilde.rows();
  if (r.dim() != d) {
    throw Error(ErrorCode::kInvalidArgument, "rescale: ratio matrix dimension");
  }
  VarParameters out;
  for (const Matrix& a : u.a_tilde) out.coeff.push_back(hadamard(r.r, a));
  out.noise_cov = Matrix(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      out.noise_cov(i, j) = r(i, 0) * r(j, 0) * u.sigma_tilde(i, j);
    }
  }
  return out;
}

std::vector<Matrix> empirical_covariances(const Matrix& traj, std::size_t max_lag) {
  const std::size_t d = traj.rows();
  const std::size_t T = traj.cols();
  if (max_lag >= T) {
    throw Error(ErrorCode::kInvalidArgument, "empirical_covariances: lag >= T");
  }
  std::vector<Matrix> out;
  for (std::size_t tau = 0; tau <= max_lag; ++tau) {
    Matrix g(d, d);
    for (std::size_t i = 0; i < d; ++i) {
      const auto zi = traj.row(i);
      for (std::size_t j = 0; j < d; ++j) {
        const auto zj = traj.row(j);
        double acc = 0.0;
        for (std::size_t t = tau; t < T; ++t) acc += zi[t] * zj[t - tau];
        g(i, j) = acc / static_cast<double>(T - tau);
      }
    }
    out.push_back(std::move(g));
  }
  return out;
}

VarParameters mlse_continuous(const Matrix& traj, std::size_t p) {
  const std::size_t d = traj.rows();
  if (traj.cols() <= d * (p + 1)) {
    throw Error(ErrorCode::kInvalidArgument, "mlse_continuous: need T > d(p+1)");
  }
  MomentSet moments;
  moments.gamma = empirical_covariances(traj, p);
  return solve_covariance_system(moments, p);
}

}  // namespace bitvar
