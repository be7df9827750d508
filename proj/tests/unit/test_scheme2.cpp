#include <cmath>
#include <numbers>
#include <random>

#include "bitvar/error.hpp"
#include "bitvar/gaussian.hpp"
#include "bitvar/quantize.hpp"
#include "bitvar/scheme2.hpp"
#include "bitvar/var_model.hpp"
#include "bitvar_oracle/oracle.hpp"
#include "doctest.h"
#include "helpers.hpp"

using bitvar::Matrix;
using bitvar::RatioMatrix;
using bitvar::RatioVariant;
using bitvar::SensorGraph;
using bitvar::VarModel;
using testing::max_diff;

namespace {

const VarModel kModel({Matrix{{0.25, 1.0}, {0.0, -0.2}}}, Matrix::identity(2));

RatioMatrix random_positive_ratios(std::size_t d, std::mt19937_64& gen) {
  std::lognormal_distribution<double> ln(0.0, 1.0);
  Matrix r(d, d, 1.0);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      if (i != j) r(i, j) = ln(gen);
    }
  }
  return {r};
}

}  // namespace

TEST_CASE("transition_mle") {
  const Matrix same{{1, -1, 2, -3, 1}, {2, -1, 1, -1, 4}};
  const auto rec = bitvar::sign_and_predominance(same, SensorGraph::complete(2));
  CHECK(bitvar::transition_mle(rec, 0, 1, 0) == 1.0);
  const Matrix opposite{{1, -1, 2, -3, 1}, {-2, 1, -1, 1, -4}};
  const auto flip = bitvar::sign_and_predominance(opposite, SensorGraph::complete(2));
  CHECK(bitvar::transition_mle(flip, 0, 1, 0) == 0.0);

  const std::size_t T = 5000;
  const auto rec2 =
      bitvar::sign_and_predominance(bitvar::simulate(kModel, T, 61), SensorGraph::complete(2));
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(testing::near(bitvar::transition_mle(rec2, i, j, 0),
                          bitvar::oracle::counting_transition(rec2, i, j, 0), 1e-12));
      for (std::size_t tau : {1, 3, 10}) {
        CHECK(std::abs(bitvar::transition_mle(rec2, i, j, tau) -
                       bitvar::oracle::counting_transition(rec2, i, j, tau)) <=
              2.0 * double(tau) / double(T));
      }
    }
  }
}

TEST_CASE("estimate_correlations_s2") {
  const std::size_t T = 100000;
  const VarModel white({Matrix(3, 3)}, Matrix::identity(3));
  const auto indep =
      bitvar::estimate_correlations_s2(bitvar::sign_and_predominance(
                                           bitvar::simulate(white, T, 62), SensorGraph::complete(3)),
                                       1);
  const double bound = 3 * std::numbers::pi / (2 * std::sqrt(double(T)));
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(indep.corr[0](i, i) == 1.0);
    for (std::size_t j = 0; j < 3; ++j) {
      if (i != j) CHECK(std::abs(indep.corr[0](i, j)) <= bound);
      CHECK(std::abs(indep.corr[1](i, j)) <= bound);
    }
  }

  const auto truth = bitvar::true_moments(kModel, 2);
  const auto est = bitvar::estimate_correlations_s2(
      bitvar::sign_and_predominance(bitvar::simulate(kModel, T, 63), SensorGraph::complete(2)), 2);
  for (std::size_t tau = 0; tau <= 2; ++tau) CHECK(max_diff(est.corr[tau], truth.corr[tau]) < 0.02);

  const Matrix same{{1, -1, 2}, {2, -1, 1}};
  const auto one = bitvar::estimate_correlations_s2(
      bitvar::sign_and_predominance(same, SensorGraph::complete(2)), 0);
  CHECK(testing::near(one.corr[0](0, 1), 1.0, 1e-15));
}

TEST_CASE("estimate_ratios_simple") {
  const VarModel sym({Matrix{{0.5, 0.2}, {0.2, 0.5}}}, Matrix::identity(2));
  const std::size_t T = 20000;
  const auto rec = bitvar::sign_and_predominance(bitvar::simulate(sym, T, 64), SensorGraph::complete(2));
  const auto r = bitvar::estimate_ratios_simple(rec, bitvar::estimate_correlations_s2(rec, 0));
  // Loose delta-method scale: sd(Q_bar) <= 1/(2 sqrt(T)), |dr/dp| <= 2 pi here.
  CHECK(std::abs(r.ratios(0, 1) - 1.0) < 3 * std::numbers::pi / std::sqrt(double(T)));
  CHECK(r.ratios(0, 1) * r.ratios(1, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.clamped_count == 0);

  const auto truth = bitvar::true_moments(kModel, 0);
  const auto big = bitvar::sign_and_predominance(bitvar::simulate(kModel, 200000, 65),
                                                 SensorGraph::complete(2));
  const auto rb = bitvar::estimate_ratios_simple(big, bitvar::estimate_correlations_s2(big, 0));
  CHECK(std::abs(rb.ratios(0, 1) / (truth.sigmas[0] / truth.sigmas[1]) - 1.0) < 0.02);

  // One series always dominates: Q_bar = 1 gets clamped.
  const Matrix dom{{10, -10, 10, -10}, {1, 1, -1, -1}};
  const auto drec = bitvar::sign_and_predominance(dom, SensorGraph::complete(2));
  const auto dr = bitvar::estimate_ratios_simple(drec, bitvar::estimate_correlations_s2(drec, 0));
  CHECK(dr.clamped_count == 1);
  CHECK(std::isfinite(dr.ratios(0, 1)));
  CHECK(dr.ratios(0, 1) > 1.0);
}

TEST_CASE("chained ratios on a path graph") {
  const VarModel m({Matrix{{0.3, 0.0, 0.0}, {0.0, 0.3, 0.0}, {0.0, 0.0, 0.3}}},
                   Matrix{{1.0, 0.0, 0.0}, {0.0, 4.0, 0.0}, {0.0, 0.0, 9.0}});
  const SensorGraph path(3, {{0, 1}, {1, 2}});
  const auto rec = bitvar::sign_and_predominance(bitvar::simulate(m, 100000, 66), path);
  const auto r = bitvar::estimate_ratios_simple(rec, bitvar::estimate_correlations_s2(rec, 0));
  CHECK(r.ratios(0, 2) == doctest::Approx(r.ratios(0, 1) * r.ratios(1, 2)).epsilon(1e-14));
  CHECK(std::abs(r.ratios(0, 2) - 1.0 / 3.0) < 0.02);
  CHECK_THROWS_AS(bitvar::estimate_ratios_efficient(rec, r.ratios), bitvar::Error);
}

TEST_CASE("ratio loss matrix") {
  std::mt19937_64 gen(67);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 2 + trial % 6;
    const RatioMatrix r = random_positive_ratios(d, gen);
    const Matrix a = bitvar::ratio_loss_matrix(r);
    CHECK(bitvar::sym_eig(a).values[0] >= -1e-10);
    std::vector<double> s(d);
    for (double& v : s) v = nd(gen);
    double quad = 0;
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) quad += s[i] * a(i, j) * s[j];
    }
    // Direct sum over ordered pairs, the i == j terms vanish since r_ii = 1.
    double direct = 0;
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) direct += std::pow(s[i] - r(i, j) * s[j], 2);
    }
    CHECK(quad == doctest::Approx(direct).epsilon(1e-12));
    CHECK(bitvar::ratio_loss(r, s) == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("optimized ratios") {
  const RatioMatrix ones{Matrix(4, 4, 1.0)};
  CHECK(max_diff(bitvar::estimate_ratios_optimized(ones).r, Matrix(4, 4, 1.0)) < 1e-12);

  const std::vector<double> sigma = {0.5, 2.0, 1.3, 0.9};
  const RatioMatrix consistent = bitvar::ratios_from_sigmas(sigma);
  CHECK(max_diff(bitvar::estimate_ratios_optimized(consistent).r, consistent.r) < 1e-12);
  CHECK(bitvar::ratio_loss(consistent, sigma) < 1e-24);

  std::mt19937_64 gen(68);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t d = 2 + trial % 7;
    const RatioMatrix r = random_positive_ratios(d, gen);
    const auto eig = bitvar::sym_eig(bitvar::ratio_loss_matrix(r));
    double biggest = 0;
    for (std::size_t i = 0; i < d; ++i) {
      if (std::abs(eig.vectors(i, 0)) > std::abs(biggest)) biggest = eig.vectors(i, 0);
    }
    double min_abs = INFINITY;
    for (std::size_t i = 0; i < d; ++i) {
      const double v = eig.vectors(i, 0) * (biggest > 0 ? 1 : -1);
      CHECK(v > 0);
      min_abs = std::min(min_abs, v);
    }
    CHECK(min_abs > 1e-12);
    const RatioMatrix opt = bitvar::estimate_ratios_optimized(r);
    CHECK(bitvar::reciprocal_defect(opt) < 1e-9);
  }

  // d = 2: the loss is minimized by the measured ratio itself.
  const RatioMatrix two{Matrix{{1.0, 1.7}, {1.0 / 1.7, 1.0}}};
  CHECK(max_diff(bitvar::estimate_ratios_optimized(two).r, two.r) < 1e-12);
}

TEST_CASE("efficient and log-domain ratios") {
  std::mt19937_64 gen(69);
  const std::vector<double> sigma = {1.0, 0.4, 2.2, 3.1};
  const RatioMatrix exact = bitvar::ratios_from_sigmas(sigma);
  const Matrix z = bitvar::simulate(VarModel({Matrix(4, 4)}, Matrix::identity(4)), 50, 70);
  const auto star = bitvar::sign_and_predominance(z, SensorGraph::star(4));
  CHECK(max_diff(bitvar::estimate_ratios_efficient(star, exact).r, exact.r) < 1e-14);
  CHECK(max_diff(bitvar::estimate_ratios_log_ls(exact).r, exact.r) < 1e-12);

  const RatioMatrix noisy = random_positive_ratios(4, gen);
  const RatioMatrix eff = bitvar::estimate_ratios_efficient(star, noisy);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(eff(i, 0) == noisy(i, 0));
    for (std::size_t j = 0; j < 4; ++j) {
      for (std::size_t k = 0; k < 4; ++k) {
        CHECK(eff(i, j) * eff(j, k) == doctest::Approx(eff(i, k)).epsilon(1e-14));
      }
    }
  }
  // With a reciprocal input the first column is reproduced exactly; the first
  // row becomes its reciprocal.
  const RatioMatrix two{Matrix{{1.0, 0.6}, {1.0 / 0.6, 1.0}}};
  const auto pair = bitvar::sign_and_predominance(z.block(0, 0, 2, 50), SensorGraph::complete(2));
  CHECK(max_diff(bitvar::estimate_ratios_efficient(pair, two).r, two.r) < 1e-15);
  CHECK(max_diff(bitvar::estimate_ratios_log_ls(two).r, two.r) < 1e-14);
}

TEST_CASE("estimate_model_s2") {
  const Matrix z = bitvar::simulate(kModel, 20000, 71);
  const auto rec = bitvar::sign_and_predominance(z, SensorGraph::complete(2));
  const auto res = bitvar::estimate_model_s2(rec, 1);
  CHECK(max_diff(res.parameters.coeff[0], kModel.coeff(0)) < 0.1);
  CHECK(res.model_class.noise_cov_normalized.trace() == doctest::Approx(2.0).epsilon(1e-12));

  // The three variants coincide in two dimensions.
  for (RatioVariant v : {RatioVariant::kOptimized, RatioVariant::kEfficient,
                         RatioVariant::kLogLeastSquares}) {
    CHECK(max_diff(bitvar::estimate_model_s2(rec, 1, v).parameters.coeff[0],
                   res.parameters.coeff[0]) < 1e-12);
  }

  // Global scale leaves every bit, hence every estimate, unchanged.
  const auto scaled = bitvar::sign_and_predominance(z * 7.5, SensorGraph::complete(2));
  CHECK(scaled == rec);

  // Flipping the sign of a component flips the off-diagonal coefficients.
  Matrix flipped = z;
  for (std::size_t t = 0; t < z.cols(); ++t) flipped(1, t) = -z(1, t);
  const auto frec = bitvar::sign_and_predominance(flipped, SensorGraph::complete(2));
  CHECK(frec.q_bits == rec.q_bits);
  const auto fres = bitvar::estimate_model_s2(frec, 1);
  const Matrix& a = res.parameters.coeff[0];
  const Matrix& b = fres.parameters.coeff[0];
  CHECK(testing::near(b(0, 0), a(0, 0), 1e-12));
  CHECK(testing::near(b(1, 1), a(1, 1), 1e-12));
  CHECK(testing::near(b(0, 1), -a(0, 1), 1e-12));
  CHECK(testing::near(b(1, 0), -a(1, 0), 1e-12));
}

TEST_CASE("scheme 2 class recovery from exact moments and ratios") {
  std::mt19937_64 gen(72);
  for (std::size_t p = 1; p <= 3; ++p) {
    const VarModel m = testing::random_stationary(4, p, gen);
    const auto truth = bitvar::true_moments(m, p);
    // Exact sign-agreement probabilities through the arcsine law.
    bitvar::MomentSet corr;
    for (std::size_t tau = 0; tau <= p; ++tau) {
      Matrix r(4, 4);
      for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
          const double lambda = 0.5 + std::asin(truth.corr[tau](i, j)) / std::numbers::pi;
          r(i, j) = (tau == 0 && i == j) ? 1.0 : bitvar::arcsine_correlation(lambda);
        }
      }
      corr.corr.push_back(r);
    }
    // Exact predominance probabilities through the closed form and back.
    Matrix ratio(4, 4, 1.0);
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        if (i == j) continue;
        const double rho = truth.corr[0](i, j);
        const double q = bitvar::predominance_probability(truth.sigmas[i] / truth.sigmas[j], rho);
        ratio(i, j) = bitvar::predominance_inverse(q, rho);
      }
    }
    const auto u = bitvar::solve_correlation_system(corr, p);
    for (const RatioMatrix& r : {RatioMatrix{ratio}, bitvar::estimate_ratios_optimized({ratio}),
                                 bitvar::estimate_ratios_log_ls({ratio})}) {
      const auto est = bitvar::rescale(u, r);
      for (std::size_t s = 0; s < p; ++s) CHECK(max_diff(est.coeff[s], m.coeff(s)) < 1e-6);
      CHECK(max_diff(bitvar::normalize_trace(est.noise_cov),
                     bitvar::model_class(m).noise_cov_normalized) < 1e-6);
    }
  }
}

TEST_CASE("independence variance prediction") {
  CHECK(bitvar::predict_variance_indep(0.7, 0.01, 0.0, 1.3) == doctest::Approx(0.01 * 1.69));
  CHECK(bitvar::predict_variance_indep(0.7, 0.0, 0.02, 1.3) == doctest::Approx(0.02 * 0.49));
  CHECK(bitvar::predict_variance_indep(0.7, 0.01, 0.02, 1.3) ==
        doctest::Approx(0.01 * 0.02 + 0.01 * 1.69 + 0.02 * 0.49));

  // Published entry (1, 2) of the first benchmark model at T = 2000:
  // MSE(a~) 5.6e-4, MSE(r) 2.1e-3, prediction 2.2e-3 (two significant digits).
  const auto mom = bitvar::true_moments(kModel, 0);
  const double r12 = mom.sigmas[0] / mom.sigmas[1];
  const double pred = bitvar::predict_variance_indep(1.0 / r12, 5.6e-4, 2.1e-3, r12);
  CHECK(std::abs(pred - 2.2e-3) <= 0.05e-3 + 2.2e-3 * 0.05);
}

TEST_CASE("chained ratio variance") {
  const std::vector<double> none;
  CHECK(bitvar::predict_ratio_variance_chain(none, 0.01).exact == 0.0);
  CHECK(bitvar::predict_ratio_variance_chain(none, 0.01).first_order == 0.0);
  for (double r : {0.3, 1.0, 2.5}) {
    const std::vector<double> one = {r};
    const auto v = bitvar::predict_ratio_variance_chain(one, 0.04);
    CHECK(v.exact == doctest::Approx(0.04));
    CHECK(v.first_order == doctest::Approx(0.04));
  }
  for (double s2 : {1e-2, 1e-3}) {
    for (std::size_t len = 1; len <= 5; ++len) {
      const std::vector<double> path(len, 1.0);
      const auto v = bitvar::predict_ratio_variance_chain(path, s2);
      CHECK(v.exact == doctest::Approx(std::pow(s2 + 1.0, double(len)) - 1.0).epsilon(1e-12));
      CHECK(v.first_order == doctest::Approx(double(len) * s2).epsilon(1e-12));
      // Second-order remainder: C(len, 2) s2^2 plus smaller terms.
      CHECK(std::abs(v.exact - v.first_order) <= double(len * len) * s2 * s2);
    }
  }
}
