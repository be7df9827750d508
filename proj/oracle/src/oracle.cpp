#include "bitvar_oracle/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

namespace bitvar::oracle {
namespace {

using Fn = std::function<long double(long double)>;

long double simpson_step(const Fn& f, long double a, long double b, long double fa,
                         long double fm, long double fb, long double whole, long double eps,
                         int depth) {
  const long double m = (a + b) / 2, lm = (a + m) / 2, rm = (m + b) / 2;
  const long double flm = f(lm), frm = f(rm);
  const long double left = (m - a) / 6 * (fa + 4 * flm + fm);
  const long double right = (b - m) / 6 * (fm + 4 * frm + fb);
  const long double diff = left + right - whole;
  if (depth <= 0 || std::fabs(diff) <= 15 * eps) return left + right + diff / 15;
  return simpson_step(f, a, m, fa, flm, fm, left, eps / 2, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, eps / 2, depth - 1);
}

long double adaptive_simpson(const Fn& f, long double a, long double b, long double eps) {
  // Split first so a narrow feature cannot hide between the initial nodes.
  constexpr int kPanels = 64;
  long double total = 0;
  const long double h = (b - a) / kPanels;
  for (int k = 0; k < kPanels; ++k) {
    const long double lo = a + h * k, hi = lo + h;
    const long double flo = f(lo), fhi = f(hi), fm = f((lo + hi) / 2);
    const long double whole = (hi - lo) / 6 * (flo + 4 * fm + fhi);
    total += simpson_step(f, lo, hi, flo, fm, fhi, whole, eps / kPanels, 40);
  }
  return total;
}

constexpr long double kPi = std::numbers::pi_v<long double>;

}  // namespace

long double normal_cdf(long double x) {
  return 0.5L * std::erfc(-x / std::numbers::sqrt2_v<long double>);
}

double psi_fine_grid(ThresholdPair eta, double rho) {
  const long double h = eta.eta1, k = eta.eta2;
  const Fn f = [h, k](long double theta) -> long double {
    const long double s = std::sin(theta), c2 = std::cos(theta) * std::cos(theta);
    const long double q = h * h - 2 * h * k * s + k * k;
    if (c2 <= 0) return q == 0 ? 1 / (2 * kPi) : 0;
    return std::exp(-q / (2 * c2)) / (2 * kPi);
  };
  return static_cast<double>(adaptive_simpson(f, 0, std::asin(static_cast<long double>(rho)),
                                              1e-15L));
}

double upper_orthant(ThresholdPair eta, double rho) {
  const long double h = eta.eta1, k = eta.eta2, r = rho;
  const long double s = std::sqrt(1 - r * r);
  const Fn f = [k, r, s](long double z) -> long double {
    const long double phi = std::exp(-z * z / 2) / std::sqrt(2 * kPi);
    return phi * normal_cdf((r * z - k) / s);
  };
  return static_cast<double>(adaptive_simpson(f, h, std::max(h, 0.0L) + 12, 1e-15L));
}

McEstimate mc_threshold_covariance(ThresholdPair eta, double rho, std::size_t n,
                                   std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  const double s = std::sqrt(1.0 - rho * rho);
  std::size_t hits = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double z1 = nd(gen);
    const double z2 = rho * z1 + s * nd(gen);
    hits += z1 >= eta.eta1 && z2 >= eta.eta2;
  }
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  const double marg = static_cast<double>((1 - normal_cdf(eta.eta1)) * (1 - normal_cdf(eta.eta2)));
  return {p - marg, std::sqrt(p * (1 - p) / static_cast<double>(n))};
}

McEstimate mc_predominance(double r, double rho, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  const double s = std::sqrt(1.0 - rho * rho);
  std::size_t hits = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double z2 = nd(gen);
    const double z1 = r * (rho * z2 + s * nd(gen));
    hits += std::abs(z1) >= std::abs(z2);
  }
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  return {p, std::sqrt(p * (1 - p) / static_cast<double>(n))};
}

double naive_binary_cross_moment(const BinaryRecord& rec, std::size_t i, std::size_t j,
                                 std::size_t tau) {
  const double T = static_cast<double>(rec.T);
  double mi = 0.0, mj = 0.0;
  for (std::size_t t = 0; t < rec.T; ++t) {
    mi += rec.x(i, t);
    mj += rec.x(j, t);
  }
  mi /= T;
  mj /= T;
  double ones = 0.0, zeros = 0.0;
  for (std::size_t t = tau; t < rec.T; ++t) {
    const double a = rec.x(i, t), b = rec.x(j, t - tau);
    ones += a * b;
    zeros += (1 - a) * (1 - b);
  }
  const double n = T - static_cast<double>(tau);
  const double gamma_x = ones / n - mi * mj;
  const double gamma_not_x = zeros / n - (1 - mi) * (1 - mj);
  return gamma_x + gamma_not_x;
}

double counting_transition(const BinaryRecord& rec, std::size_t i, std::size_t j,
                        std::size_t tau) {
  double r = 0.0, si = 0.0, sj = 0.0;
  for (std::size_t t = tau; t < rec.T; ++t) r += rec.x(i, t) * rec.x(j, t - tau);
  for (std::size_t t = 0; t < rec.T; ++t) {
    si += rec.x(i, t);
    sj += rec.x(j, t);
  }
  return (2 * r - (si + sj) + static_cast<double>(rec.T)) /
         static_cast<double>(rec.T - tau);
}

std::vector<std::complex<double>> polynomial_roots(const std::vector<double>& c) {
  const std::size_t n = c.size();
  using C = std::complex<long double>;
  auto eval = [&c](C z) {
    C v = 1;
    for (double ck : c) v = v * z + static_cast<long double>(ck);
    return v;
  };
  long double bound = 1;
  for (double ck : c) bound = std::max(bound, 1 + std::abs(static_cast<long double>(ck)));
  std::vector<C> z(n);
  for (std::size_t k = 0; k < n; ++k) {
    z[k] = std::polar(0.5L * bound, 0.4L + 2 * kPi * static_cast<long double>(k) /
                                              static_cast<long double>(n));
  }
  for (int iter = 0; iter < 2000; ++iter) {
    long double change = 0;
    for (std::size_t k = 0; k < n; ++k) {
      C denom = 1;
      for (std::size_t m = 0; m < n; ++m) {
        if (m != k) denom *= z[k] - z[m];
      }
      const C step = eval(z[k]) / denom;
      z[k] -= step;
      change = std::max(change, std::abs(step));
    }
    if (change < 1e-18L) break;
  }
  std::vector<std::complex<double>> out;
  for (const C& v : z) out.emplace_back(static_cast<double>(v.real()), static_cast<double>(v.imag()));
  return out;
}

double scalar_ar_spectral_radius(const std::vector<double>& a) {
  std::vector<double> c(a.size());
  std::transform(a.begin(), a.end(), c.begin(), [](double v) { return -v; });
  double rho = 0.0;
  for (const auto& z : polynomial_roots(c)) rho = std::max(rho, std::abs(z));
  return rho;
}

}  // namespace bitvar::oracle
