#include "bitvar/gaussian.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "bitvar/error.hpp"

namespace bitvar {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSqrtTwoPi = 2.5066282746310002;

// 5-point Gauss-Legendre rule on [-1, 1].
constexpr std::array<double, 5> kGlNodes = {
    -0.906179845938663992797626878299, -0.538469310105683091036314420700, 0.0,
    0.538469310105683091036314420700, 0.906179845938663992797626878299};
constexpr std::array<double, 5> kGlWeights = {
    0.236926885056189087514264040720, 0.478628670499366468041291514836,
    0.568888888888888888888888888889, 0.478628670499366468041291514836,
    0.236926885056189087514264040720};
constexpr int kPanels = 8;

// |rho| above which the panel anchored at +-1 is used.
constexpr double kAnchorSwitch = 0.925;

constexpr double kBisectLo = -1.0 + 1e-12;
constexpr double kBisectHi = 1.0 - 1e-12;

template <class F>
double composite_gauss_legendre(F&& f, double a, double b) {
  const double h = (b - a) / kPanels;
  double sum = 0.0;
  for (int panel = 0; panel < kPanels; ++panel) {
    const double mid = a + (panel + 0.5) * h;
    double part = 0.0;
    for (std::size_t k = 0; k < kGlNodes.size(); ++k) {
      part += kGlWeights[k] * f(mid + 0.5 * h * kGlNodes[k]);
    }
    sum += 0.5 * h * part;
  }
  return sum;
}

// integral_0^rho phi2(h, k | x) dx for |rho| <= kAnchorSwitch, computed as
// (1/2pi) integral_0^asin(rho) exp(-(h^2 + k^2 - 2hk sin t) / (2 cos^2 t)) dt.
double psi_from_zero(double h, double k, double rho) {
  const double half_sq = 0.5 * (h * h + k * k);
  const double hk = h * k;
  auto integrand = [&](double theta) {
    const double s = std::sin(theta);
    return std::exp((s * hk - half_sq) / ((1.0 - s) * (1.0 + s)));
  };
  return composite_gauss_legendre(integrand, 0.0, std::asin(rho)) / kTwoPi;
}

// integral_rho^1 phi2(h, k | x) dx for rho in [kAnchorSwitch, 1).
//
// With t = sqrt(1 - x^2) the integrand is
//   exp(-(h-k)^2 / (2 t^2)) * exp(-hk / (1 + x)) / x / (2 pi),
// whose first factor is a sharp step when h ~ k. The second factor is
// replaced by its expansion exp(-hk/2) (1 + c t^2 + c d t^4), integrated in
// closed form; only the O(t^6) remainder goes through quadrature.
double psi_tail_to_one(double h, double k, double rho) {
  const double hk = h * k;
  const double as = (1.0 - rho) * (1.0 + rho);
  const double a = std::sqrt(as);
  const double bs = (h - k) * (h - k);
  const double c = (4.0 - hk) / 8.0;
  const double d = (12.0 - hk) / 16.0;

  double closed = a * std::exp(-(bs / as + hk) / 2.0) *
                  (1.0 - c * (bs - as) * (1.0 - d * bs / 5.0) / 3.0 +
                   c * d * as * as / 5.0);
  if (hk > -160.0) {
    const double b = std::sqrt(bs);
    closed -= std::exp(-hk / 2.0) * kSqrtTwoPi * std_normal_cdf(-b / a) * b *
              (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
  }

  auto remainder = [&](double t) {
    const double ts = t * t;
    if (ts == 0.0) return 0.0;
    const double x = std::sqrt(1.0 - ts);
    const double expo = -(bs / ts + hk) / 2.0;
    if (expo <= -100.0) return 0.0;
    return std::exp(expo) *
           (std::exp(-hk * (1.0 - x) / (2.0 * (1.0 + x))) / x -
            (1.0 + c * ts * (1.0 + d * ts)));
  };
  return (closed + composite_gauss_legendre(remainder, 0.0, a)) / kTwoPi;
}

double psi_at_one(double h, double k) {
  return std_normal_cdf(-std::max(h, k)) - std_normal_cdf(-h) * std_normal_cdf(-k);
}

double psi_nonnegative(double h, double k, double rho) {
  if (rho >= 1.0) return psi_at_one(h, k);
  if (rho <= kAnchorSwitch) return psi_from_zero(h, k, rho);
  return psi_at_one(h, k) - psi_tail_to_one(h, k, rho);
}

double lower_quantile(double q) {
  // Acklam's rational approximation, refined by Halley steps on erfc.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00, 2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (q < p_low) {
    const double r = std::sqrt(-2.0 * std::log(q));
    x = (((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
        ((((d[0] * r + d[1]) * r + d[2]) * r + d[3]) * r + 1.0);
  } else {
    const double u = q - 0.5;
    const double r = u * u;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        u /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  for (int step = 0; step < 2; ++step) {
    const double e = std_normal_cdf(x) - q;
    const double u = e * kSqrtTwoPi * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

}  // namespace

double std_normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorCode::kDomainError,
                "std_normal_quantile: p=" + std::to_string(p));
  }
  if (p == 0.5) return 0.0;
  // 1 - p is exact for p >= 1/2, so the upper half reuses the lower tail.
  return p < 0.5 ? lower_quantile(p) : -lower_quantile(1.0 - p);
}

double bivariate_pdf(ThresholdPair eta, double rho) {
  if (!(std::abs(rho) < 1.0)) {
    throw Error(ErrorCode::kDomainError,
                "bivariate_pdf: |rho| >= 1 (rho=" + std::to_string(rho) + ")");
  }
  const double om = (1.0 - rho) * (1.0 + rho);
  const double q =
      eta.eta1 * eta.eta1 - 2.0 * rho * eta.eta1 * eta.eta2 + eta.eta2 * eta.eta2;
  return std::exp(-q / (2.0 * om)) / (kTwoPi * std::sqrt(om));
}

double psi(ThresholdPair eta, double rho) {
  if (!(rho >= -1.0 && rho <= 1.0)) {
    throw Error(ErrorCode::kDomainError,
                "psi: rho outside [-1, 1] (rho=" + std::to_string(rho) + ")");
  }
  if (rho >= 0.0) return psi_nonnegative(eta.eta1, eta.eta2, rho);
  // Psi_{h,k}(rho) = -Psi_{h,-k}(-rho)
  return -psi_nonnegative(eta.eta1, -eta.eta2, -rho);
}

PsiInverse psi_inverse(ThresholdPair eta, double v) {
  double lo = kBisectLo;
  double hi = kBisectHi;
  const double v_lo = psi(eta, lo);
  const double v_hi = psi(eta, hi);
  if (v <= v_lo) return {lo, v < v_lo};
  if (v >= v_hi) return {hi, v > v_hi};
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (psi(eta, mid) < v) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {0.5 * (lo + hi), false};
}

double arcsine_correlation(double lambda) {
  return std::sin(std::numbers::pi * (lambda - 0.5));
}

double predominance_probability(double r, double rho) {
  if (!(r > 0.0) || !(std::abs(rho) < 1.0)) {
    throw Error(ErrorCode::kDomainError,
                "predominance_probability: r=" + std::to_string(r) +
                    " rho=" + std::to_string(rho));
  }
  const double s = std::sqrt((1.0 - rho) * (1.0 + rho));
  return (std::atan((r - rho) / s) + std::atan((r + rho) / s)) /
         std::numbers::pi;
}

double predominance_inverse(double p, double rho) {
  if (!(p > 0.0 && p < 1.0) || !(std::abs(rho) < 1.0)) {
    throw Error(ErrorCode::kDomainError,
                "predominance_inverse: p=" + std::to_string(p) +
                    " rho=" + std::to_string(rho));
  }
  // r = sqrt(u^2 + 1) - u with u = sqrt(1 - rho^2) / tan(pi p); the cotangent
  // form stays finite at p = 1/2 and the u >= 0 branch avoids cancellation.
  const double s = std::sqrt((1.0 - rho) * (1.0 + rho));
  const double angle = std::numbers::pi * p;
  const double u = s * std::cos(angle) / std::sin(angle);
  const double root = std::hypot(u, 1.0);
  return u >= 0.0 ? 1.0 / (root + u) : root - u;
}

}  // namespace bitvar
