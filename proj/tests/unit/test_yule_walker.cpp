#include <random>

#include "bitvar/error.hpp"
#include "bitvar/var_model.hpp"
#include "bitvar/yule_walker.hpp"
#include "doctest.h"
#include "helpers.hpp"

using bitvar::Matrix;
using bitvar::VarModel;
using testing::max_diff;

TEST_CASE("exact recovery from true moments") {
  std::mt19937_64 gen(41);
  for (std::size_t p = 1; p <= 3; ++p) {
    for (int trial = 0; trial < 10; ++trial) {
      const VarModel m = testing::random_stationary(2 + trial % 3, p, gen);
      const auto mom = bitvar::true_moments(m, p);
      const auto est = bitvar::solve_covariance_system(mom, p);
      for (std::size_t s = 0; s < p; ++s) CHECK(max_diff(est.coeff[s], m.coeff(s)) < 1e-8);
      CHECK(max_diff(est.noise_cov, m.noise_cov()) < 1e-8);

      // Correlation system: similar coefficients with the same diagonal.
      const auto u = bitvar::solve_correlation_system(mom, p);
      const auto r = bitvar::ratios_from_sigmas(mom.sigmas);
      for (std::size_t s = 0; s < p; ++s) {
        for (std::size_t i = 0; i < m.dim(); ++i) {
          CHECK(testing::near(u.a_tilde[s](i, i), m.coeff(s)(i, i), 1e-8));
          for (std::size_t j = 0; j < m.dim(); ++j) {
            const double expected = m.coeff(s)(i, j) * mom.sigmas[j] / mom.sigmas[i];
            CHECK(testing::near(u.a_tilde[s](i, j), expected, 1e-8));
          }
        }
      }
      const auto back = bitvar::rescale(u, r);
      for (std::size_t s = 0; s < p; ++s) CHECK(max_diff(back.coeff[s], m.coeff(s)) < 1e-8);
      const double s1 = mom.sigmas[0] * mom.sigmas[0];
      CHECK(max_diff(back.noise_cov * s1, m.noise_cov()) < 1e-8);
      CHECK(max_diff(bitvar::normalize_trace(back.noise_cov), bitvar::normalize_trace(m.noise_cov())) <
            1e-8);
    }
  }
}

TEST_CASE("textbook cases") {
  const VarModel white({Matrix(2, 2)}, Matrix{{2.0, 0.3}, {0.3, 1.0}});
  const auto mom = bitvar::true_moments(white, 1);
  const auto est = bitvar::solve_covariance_system(mom, 1);
  CHECK(est.coeff[0].max_abs() < 1e-14);
  CHECK(max_diff(est.noise_cov, mom.gamma[0]) < 1e-14);

  // Scalar AR(1): a = g1 / g0, s2 = g0 - a g1.
  bitvar::MomentSet scalar = bitvar::from_covariances({Matrix{{2.0}}, Matrix{{1.2}}});
  const auto ar = bitvar::solve_covariance_system(scalar, 1);
  CHECK(testing::near(ar.coeff[0](0, 0), 0.6, 1e-15));
  CHECK(testing::near(ar.noise_cov(0, 0), 2.0 - 0.6 * 1.2, 1e-15));

  // d = 1: the correlation system is the covariance system on unit variance.
  const VarModel ar2({Matrix{{0.4}}, Matrix{{0.3}}}, Matrix{{3.0}});
  const auto m2 = bitvar::true_moments(ar2, 2);
  const auto u = bitvar::solve_correlation_system(m2, 2);
  const auto c = bitvar::solve_covariance_system(bitvar::from_covariances(m2.corr), 2);
  for (std::size_t s = 0; s < 2; ++s) CHECK(max_diff(u.a_tilde[s], c.coeff[s]) < 1e-14);
  CHECK(max_diff(u.sigma_tilde, c.noise_cov) < 1e-14);
}

TEST_CASE("counterexample: same unscaled estimate, different models") {
  const VarModel first = testing::counterexample_first();
  const VarModel second = testing::counterexample_second();
  const auto m1 = bitvar::true_moments(first, 1);
  const auto m2 = bitvar::true_moments(second, 1);
  const auto u1 = bitvar::solve_correlation_system(m1, 1);
  const auto u2 = bitvar::solve_correlation_system(m2, 1);
  CHECK(max_diff(u1.a_tilde[0], u2.a_tilde[0]) < 1e-8);
  CHECK(max_diff(u1.sigma_tilde, u2.sigma_tilde) < 1e-8);
  const auto a1 = bitvar::rescale(u1, bitvar::ratios_from_sigmas(m1.sigmas));
  const auto a2 = bitvar::rescale(u2, bitvar::ratios_from_sigmas(m2.sigmas));
  CHECK(max_diff(a1.coeff[0], first.coeff(0)) < 1e-8);
  CHECK(max_diff(a2.coeff[0], second.coeff(0)) < 1e-8);
  CHECK(max_diff(a1.coeff[0], a2.coeff[0]) > 0.4);
}

TEST_CASE("rescale") {
  const bitvar::UnscaledEstimate u{{Matrix{{0.5, 0.2}, {-0.1, 0.3}}},
                                   Matrix{{1.0, 0.4}, {0.4, 2.0}}};
  const auto same = bitvar::rescale(u, bitvar::RatioMatrix{Matrix{{1, 1}, {1, 1}}});
  CHECK(same.coeff[0] == u.a_tilde[0]);
  CHECK(same.noise_cov == u.sigma_tilde);

  const std::vector<double> sig = {1.0, 3.0};
  const auto r = bitvar::ratios_from_sigmas(sig);
  CHECK(r(0, 1) == doctest::Approx(1.0 / 3.0));
  CHECK(bitvar::reciprocal_defect(r) < 1e-15);
  const auto out = bitvar::rescale(u, r);
  CHECK(out.coeff[0](0, 0) == 0.5);
  CHECK(out.coeff[0](1, 1) == 0.3);
  CHECK(out.coeff[0](0, 1) == doctest::Approx(0.2 / 3.0));
  CHECK(out.coeff[0](1, 0) == doctest::Approx(-0.3));
  // s_ij = r_i0 r_j0 s~_ij
  CHECK(out.noise_cov(1, 1) == doctest::Approx(18.0));
  CHECK(out.noise_cov(0, 1) == doctest::Approx(1.2));
}

TEST_CASE("block system guards") {
  // Perfectly correlated components make the system singular.
  const Matrix g0{{1.0, 1.0}, {1.0, 1.0}};
  const bitvar::MomentSet degenerate = bitvar::from_covariances({g0, g0 * 0.5});
  CHECK_THROWS_AS(bitvar::solve_covariance_system(degenerate, 1), bitvar::Error);
  try {
    bitvar::mlse_continuous(Matrix(2, 100), 1);
    FAIL("constant trajectory accepted");
  } catch (const bitvar::Error& e) {
    CHECK(e.code() == bitvar::ErrorCode::kSingularSystem);
  }
  CHECK_THROWS_AS(bitvar::mlse_continuous(Matrix(2, 4), 1), bitvar::Error);
}

TEST_CASE("empirical covariances use the 1 / (T - tau) divisor") {
  const Matrix z{{1, 2, 3, 4}};
  const auto g = bitvar::empirical_covariances(z, 2);
  CHECK(g[0](0, 0) == doctest::Approx((1 + 4 + 9 + 16) / 4.0));
  CHECK(g[1](0, 0) == doctest::Approx((2 * 1 + 3 * 2 + 4 * 3) / 3.0));
  CHECK(g[2](0, 0) == doctest::Approx((3 * 1 + 4 * 2) / 2.0));
}

TEST_CASE("mlse on a long simulation") {
  const VarModel m({Matrix{{0.25, 1.0}, {0.0, -0.2}}}, Matrix::identity(2));
  const auto est = bitvar::mlse_continuous(bitvar::simulate(m, 1000000, 42), 1);
  CHECK(max_diff(est.coeff[0], m.coeff(0)) < 0.01);
  CHECK(max_diff(est.noise_cov, m.noise_cov()) < 0.01);
}
