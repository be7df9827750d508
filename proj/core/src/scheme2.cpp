#include "bitvar/scheme2.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bitvar/error.hpp"
#include "bitvar/gaussian.hpp"

namespace bitvar {
namespace {

// Keeps the lag-0 correlation inside the open domain of the predominance
// inverse when lambda_hat hits 0 or 1.
constexpr double kRhoClamp = 1e-7;

void require_positive(const RatioMatrix& r, const char* what) {
  for (double v : r.r.data()) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::kDomainError,
                  std::string(what) + ": ratios must be positive and finite");
    }
  }
}

}  // namespace

const char* to_string(RatioVariant v) noexcept {
  switch (v) {
    case RatioVariant::kSimple: return "simple";
    case RatioVariant::kOptimized: return "optimized";
    case RatioVariant::kEfficient: return "efficient";
    case RatioVariant::kLogLeastSquares: return "log";
  }
  return "unknown";
}

RatioVariant parse_ratio_variant(std::string_view name) {
  if (name == "simple") return RatioVariant::kSimple;
  if (name == "optimized") return RatioVariant::kOptimized;
  if (name == "efficient") return RatioVariant::kEfficient;
  if (name == "log") return RatioVariant::kLogLeastSquares;
  throw Error(ErrorCode::kConfigError,
              "unknown ratio variant '" + std::string(name) + "'");
}

double transition_mle(const BinaryRecord& rec, std::size_t i, std::size_t j,
                      std::size_t tau) {
  return match_fraction(rec, i, j, tau);
}

MomentSet estimate_correlations_s2(const BinaryRecord& rec, std::size_t max_lag) {
  const std::size_t d = rec.d;
  MomentSet out;
  for (std::size_t tau = 0; tau <= max_lag; ++tau) {
    Matrix r(d, d);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        if (tau == 0 && i == j) {
          r(i, j) = 1.0;
        } else if (tau == 0 && j < i) {
          r(i, j) = r(j, i);
        } else {
          r(i, j) = arcsine_correlation(transition_mle(rec, i, j, tau));
        }
      }
    }
    out.corr.push_back(std::move(r));
  }
  return out;
}

RatioEstimate estimate_ratios_simple(const BinaryRecord& rec,
                                     const MomentSet& corr_hat) {
  const std::size_t d = rec.d;
  const double T = static_cast<double>(rec.T);
  const double lo = 1.0 / (2.0 * T);
  const double hi = 1.0 - lo;
  RatioEstimate out{RatioMatrix{Matrix(d, d)}};
  Matrix& r = out.ratios.r;
  for (std::size_t i = 0; i < d; ++i) r(i, i) = 1.0;

  for (std::size_t e = 0; e < rec.edges.size(); ++e) {
    const auto [i, j] = rec.edges[e];
    std::size_t ones = 0;
    for (std::uint8_t b : rec.q_row(e)) ones += b;
    double q_bar = static_cast<double>(ones) / T;
    if (q_bar < lo || q_bar > hi) {
      q_bar = std::clamp(q_bar, lo, hi);
      ++out.clamped_count;
    }
    const double rho = std::clamp(corr_hat.corr.at(0)(i, j), -1.0 + kRhoClamp,
                                  1.0 - kRhoClamp);
    r(i, j) = predominance_inverse(q_bar, rho);
    r(j, i) = 1.0 / r(i, j);
  }

  bool complete = rec.edges.size() == d * (d - 1) / 2;
  if (complete) return out;

  std::optional<SensorGraph> graph;
  try {
    graph.emplace(d, rec.edges);
  } catch (const Error& e) {
    throw Error(ErrorCode::kMissingEdge,
                std::string("estimate_ratios_simple: ") + e.what());
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      if (graph->has_edge(i, j)) continue;
      const std::vector<std::size_t> path = graph->shortest_path(i, j);
      double prod = 1.0;
      for (std::size_t l = 1; l < path.size(); ++l) prod *= r(path[l - 1], path[l]);
      r(i, j) = prod;
      r(j, i) = 1.0 / prod;
    }
  }
  return out;
}

Matrix ratio_loss_matrix(const RatioMatrix& r) {
  const std::size_t d = r.dim();
  Matrix a(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    double diag = static_cast<double>(d) - 2.0;
    for (std::size_t k = 0; k < d; ++k) diag += r(k, i) * r(k, i);
    a(i, i) = diag;
    for (std::size_t j = 0; j < d; ++j) {
      if (j != i) a(i, j) = -(r(i, j) + r(j, i));
    }
  }
  return a;
}

double ratio_loss(const RatioMatrix& r, std::span<const double> sigma) {
  double loss = 0.0;
  for (std::size_t i = 0; i < r.dim(); ++i) {
    for (std::size_t j = 0; j < r.dim(); ++j) {
      const double e = sigma[i] - r(i, j) * sigma[j];
      loss += e * e;
    }
  }
  return loss;
}

RatioMatrix estimate_ratios_optimized(const RatioMatrix& simple) {
  const std::size_t d = simple.dim();
  if (d < 2) return simple;
  require_positive(simple, "estimate_ratios_optimized");
  const SymmetricEigen eig = sym_eig(ratio_loss_matrix(simple));
  std::vector<double> s(d);
  std::size_t largest = 0;
  for (std::size_t i = 0; i < d; ++i) {
    s[i] = eig.vectors(i, 0);
    if (std::abs(s[i]) > std::abs(s[largest])) largest = i;
  }
  if (s[largest] < 0.0) {
    for (double& v : s) v = -v;
  }
  for (double v : s) {
    if (!(v > 0.0)) {
      throw Error(ErrorCode::kDomainError,
                  "estimate_ratios_optimized: eigenvector not single-signed");
    }
  }
  return ratios_from_sigmas(s);
}

RatioMatrix estimate_ratios_efficient(const BinaryRecord& rec,
                                      const RatioMatrix& simple) {
  const std::size_t d = simple.dim();
  for (std::size_t j = 1; j < d; ++j) {
    if (!rec.edge_index(0, j)) {
      throw Error(ErrorCode::kMissingEdge,
                  "estimate_ratios_efficient: edge (0, " + std::to_string(j) +
                      ") was not measured");
    }
  }
  RatioMatrix out{Matrix(d, d)};
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      out.r(i, j) = i == j ? 1.0 : simple(i, 0) / simple(j, 0);
    }
  }
  return out;
}

RatioMatrix estimate_ratios_log_ls(const RatioMatrix& simple) {
  const std::size_t d = simple.dim();
  require_positive(simple, "estimate_ratios_log_ls");
  std::vector<double> theta(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      theta[i] += std::log(simple(i, j)) - std::log(simple(j, i));
    }
    theta[i] /= 2.0 * static_cast<double>(d);
  }
  RatioMatrix out{Matrix(d, d)};
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      out.r(i, j) = i == j ? 1.0 : std::exp(theta[i] - theta[j]);
    }
  }
  return out;
}

Scheme2Result estimate_model_s2(const BinaryRecord& rec, std::size_t p,
                                RatioVariant variant) {
  Scheme2Result out{.corr_hat = estimate_correlations_s2(rec, p),
                    .simple_ratios = {},
                    .ratios = {},
                    .unscaled = {},
                    .parameters = {},
                    .model_class = {},
                    .variant = variant};
  RatioEstimate simple = estimate_ratios_simple(rec, out.corr_hat);
  out.clamped_count = simple.clamped_count;
  out.simple_ratios = std::move(simple.ratios);
  switch (variant) {
    case RatioVariant::kSimple:
      out.ratios = out.simple_ratios;
      break;
    case RatioVariant::kOptimized:
      out.ratios = estimate_ratios_optimized(out.simple_ratios);
      break;
    case RatioVariant::kEfficient:
      out.ratios = estimate_ratios_efficient(rec, out.simple_ratios);
      break;
    case RatioVariant::kLogLeastSquares:
      out.ratios = estimate_ratios_log_ls(out.simple_ratios);
      break;
  }
  out.unscaled = solve_correlation_system(out.corr_hat, p);
  out.parameters = rescale(out.unscaled, out.ratios);
  out.model_class = {out.parameters.coeff, normalize_trace(out.parameters.noise_cov)};
  return out;
}

double predict_variance_indep(double tilde_a, double var_tilde, double var_r,
                              double mean_r) {
  return var_tilde * var_r + var_tilde * mean_r * mean_r + var_r * tilde_a * tilde_a;
}

ChainVariance predict_ratio_variance_chain(std::span<const double> path_ratios,
                                           double sigma_r2) {
  ChainVariance out;
  if (path_ratios.empty()) return out;
  double prod_sq = 1.0;
  double prod_shift = 1.0;
  double inv_sq_sum = 0.0;
  for (double r : path_ratios) {
    if (!(r > 0.0)) {
      throw Error(ErrorCode::kDomainError,
                  "predict_ratio_variance_chain: ratios must be positive");
    }
    prod_sq *= r * r;
    prod_shift *= sigma_r2 + r * r;
    inv_sq_sum += 1.0 / (r * r);
  }
  out.first_order = sigma_r2 * prod_sq * inv_sq_sum;
  out.exact = prod_shift - prod_sq;
  return out;
}

}  // namespace bitvar
