#pragma once

namespace bitvar {

/// Thresholds expressed in units of each series' standard deviation.
struct ThresholdPair {
  double eta1 = 0.0;
  double eta2 = 0.0;
};

/// Standard normal CDF.
double std_normal_cdf(double x);

/// Standard normal quantile. Throws kDomainError unless 0 < p < 1.
double std_normal_quantile(double p);

/// Bivariate standard normal density at (eta1, eta2) with correlation rho.
/// Throws kDomainError when |rho| >= 1.
double bivariate_pdf(ThresholdPair eta, double rho);

/// Generalized arcsine map
///   Psi(rho) = Pr(Z1 >= eta1, Z2 >= eta2) - Pr(Z1 >= eta1) Pr(Z2 >= eta2)
///            = integral_0^rho of bivariate_pdf(eta, x) dx.
///
/// For |rho| <= 0.925 the integral runs from 0 in the angle variable
/// x = sin(theta) with a composite 5-point Gauss-Legendre rule (8 panels).
/// Beyond that it is anchored at +-1, where Psi is known in closed form, and
/// the endpoint step of the integrand is integrated analytically
/// (Drezner-Wesolowsky, as refined by Genz). Accepts rho in [-1, 1].
double psi(ThresholdPair eta, double rho);

struct PsiInverse {
  double rho = 0.0;
  bool clamped = false;  // v was outside the reachable range of psi
};

/// Bisection inverse of psi on [-1 + 1e-12, 1 - 1e-12]. Out-of-range
/// targets are clamped to the nearest reachable correlation and flagged.
PsiInverse psi_inverse(ThresholdPair eta, double v);

/// Zero-threshold inverse: correlation from the probability that two
/// centered Gaussians share a sign, sin(pi (lambda - 1/2)).
double arcsine_correlation(double lambda);

/// Pr(|Z1| >= |Z2|) for centered Gaussians with sigma1/sigma2 = r and
/// correlation rho. Throws kDomainError for r <= 0 or |rho| >= 1.
double predominance_probability(double r, double rho);

/// Ratio sigma1/sigma2 from a predominance probability p and correlation.
/// Throws kDomainError unless 0 < p < 1 and |rho| < 1.
double predominance_inverse(double p, double rho);

}  // namespace bitvar
