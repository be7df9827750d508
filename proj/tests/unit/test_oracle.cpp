// The references are only useful if they are right; pin them against closed forms.
#include <cmath>
#include <numbers>

#include "bitvar_oracle/oracle.hpp"
#include "doctest.h"
#include "helpers.hpp"

TEST_CASE("oracle references on closed forms") {
  for (double r : {-0.9, -0.2, 0.5, 0.99}) {
    CHECK(testing::near(bitvar::oracle::psi_fine_grid({0, 0}, r),
                        std::asin(r) / (2 * std::numbers::pi), 1e-13));
    CHECK(testing::near(bitvar::oracle::upper_orthant({0, 0}, r),
                        0.25 + std::asin(r) / (2 * std::numbers::pi), 1e-12));
  }
  // rho = 0: independent tails.
  const double tails = static_cast<double>((1 - bitvar::oracle::normal_cdf(0.7)) *
                                           (1 - bitvar::oracle::normal_cdf(-0.4)));
  CHECK(testing::near(bitvar::oracle::upper_orthant({0.7, -0.4}, 0.0), tails, 1e-12));

  const auto roots = bitvar::oracle::polynomial_roots({-3.0, 2.0});  // (z - 1)(z - 2)
  double lo = std::min(roots[0].real(), roots[1].real());
  double hi = std::max(roots[0].real(), roots[1].real());
  CHECK(testing::near(lo, 1.0, 1e-12));
  CHECK(testing::near(hi, 2.0, 1e-12));
  CHECK(testing::near(bitvar::oracle::scalar_ar_spectral_radius({0.0, -0.25}), 0.5, 1e-12));

  const auto mc = bitvar::oracle::mc_threshold_covariance({0, 0}, 0.0, 400000, 3);
  CHECK(std::abs(mc.mean) < 4 * mc.std_error);
}
