#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "bitvar/matrix.hpp"
#include "bitvar/var_model.hpp"

namespace testing {

inline bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

inline double max_diff(const bitvar::Matrix& a, const bitvar::Matrix& b) {
  return bitvar::max_abs_diff(a, b);
}

inline bitvar::Matrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& gen,
                                    double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, scale);
  bitvar::Matrix m(r, c);
  for (double& v : m.data()) v = nd(gen);
  return m;
}

inline bitvar::Matrix random_spd(std::size_t d, std::mt19937_64& gen) {
  const bitvar::Matrix b = random_matrix(d, d, gen);
  return b * b.transpose() + bitvar::Matrix::identity(d) * 0.5;
}

// Stationary VAR(d, p) with a random positive-definite Sigma_E; coefficients
// are shrunk until the companion spectral radius is below 0.9.
inline bitvar::VarModel random_stationary(std::size_t d, std::size_t p, std::mt19937_64& gen) {
  std::vector<bitvar::Matrix> coeff;
  for (std::size_t s = 0; s < p; ++s) {
    coeff.push_back(random_matrix(d, d, gen, 0.5 / std::sqrt(static_cast<double>(d * p))));
  }
  for (;;) {
    bitvar::VarModel m(coeff, random_spd(d, gen));
    if (m.spectral_radius() < 0.9) return m;
    for (auto& a : coeff) a *= 0.8;
  }
}

// The two VAR(2, 1) models sharing correlations but not coefficients. The
// second noise covariance is diag(1, 4): the series variances then differ by
// the factor that makes the two correlation sequences coincide.
inline bitvar::VarModel counterexample_first() {
  return bitvar::VarModel({bitvar::Matrix{{0.5, 1.0}, {0.0, 0.5}}}, bitvar::Matrix::identity(2));
}
inline bitvar::VarModel counterexample_second() {
  return bitvar::VarModel({bitvar::Matrix{{0.5, 0.5}, {0.0, 0.5}}},
                          bitvar::Matrix{{1.0, 0.0}, {0.0, 4.0}});
}

}  // namespace testing
