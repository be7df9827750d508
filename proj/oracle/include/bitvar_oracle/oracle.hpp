#pragma once

// Slow, independent reference computations. Each one avoids the shortcut the
// library takes so that agreement between the two means something.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "bitvar/gaussian.hpp"
#include "bitvar/quantize.hpp"

namespace bitvar::oracle {

/// Phi in long double through erfcl.
long double normal_cdf(long double x);

/// integral_0^rho phi2(eta, x) dx by adaptive Simpson in x = sin(theta),
/// long double, absolute tolerance ~1e-14.
double psi_fine_grid(ThresholdPair eta, double rho);

/// Pr(Z1 >= eta1, Z2 >= eta2) by integrating the conditional tail
/// phi(z) Phi((rho z - eta2) / sqrt(1 - rho^2)) over z >= eta1.
double upper_orthant(ThresholdPair eta, double rho);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Pr(Z1 >= eta1, Z2 >= eta2) - Pr(Z1 >= eta1) Pr(Z2 >= eta2) from n draws.
/// The product of marginals is subtracted exactly; only the joint frequency
/// is sampled.
McEstimate mc_threshold_covariance(ThresholdPair eta, double rho, std::size_t n,
                                   std::uint64_t seed);

/// Pr(|Z1| >= |Z2|) for centered Gaussians with sigma1/sigma2 = r.
McEstimate mc_predominance(double r, double rho, std::size_t n, std::uint64_t seed);

/// gamma_X(tau) + gamma_{1-X}(tau), each term computed separately in two
/// passes (means first, then lagged products).
double naive_binary_cross_moment(const BinaryRecord& rec, std::size_t i, std::size_t j,
                                 std::size_t tau);

/// (2 R_ij(tau) - (S_i + S_j) + T) / (T - tau), with R the lagged product sum
/// and S the full-record bit sums.
double counting_transition(const BinaryRecord& rec, std::size_t i, std::size_t j,
                        std::size_t tau);

/// Roots of the monic polynomial z^n + c[0] z^(n-1) + ... + c[n-1] by
/// Durand-Kerner iteration.
std::vector<std::complex<double>> polynomial_roots(const std::vector<double>& c);

/// Spectral radius of a scalar AR(p) through the roots of
/// z^p - a_1 z^(p-1) - ... - a_p.
double scalar_ar_spectral_radius(const std::vector<double>& a);

}  // namespace bitvar::oracle
