#include <cmath>
#include <numbers>
#include <random>

#include "anisofield/error.hpp"
#include "anisofield/smoothness.hpp"
#include "anisofield/variogram.hpp"
#include "doctest.h"

using namespace anisofield;
using doctest::Approx;

namespace {
const SpectralModel& reference() {
  static const SpectralModel m = SpectralModel::canonical({1.0, 2.0}, 4.0);
  return m;
}
const QuadratureSpec kQuad = QuadratureSpec::defaults(2);
}  // namespace

TEST_SUITE("smoothness") {
  TEST_CASE("verdicts of the reference models") {
    const SmoothnessReport r = ms_derivative_report(reference(), kQuad);
    CHECK(r.directions[0].exists_ms_partial);
    CHECK(r.directions[1].exists_ms_partial);
    CHECK(r.ms_differentiable);
    CHECK(r.sample_path_differentiable);
    CHECK(r.directions[0].margin == Approx(0.25));

    const SmoothnessReport f = differentiability_verdicts(SpectralModel::fbm(0.5, 2));
    CHECK_FALSE(f.directions[0].exists_ms_partial);
    CHECK_FALSE(f.ms_differentiable);
    CHECK_FALSE(f.directions[0].derivative_variance);

    const SmoothnessReport s = differentiability_verdicts(SpectralModel::stein(1.5, {1, 1}, {1, 1}, {1, 1}));
    CHECK_FALSE(s.ms_differentiable);
    CHECK_FALSE(s.noninteger_alpha);
  }

  // With a = 1 + |l_1|: integral of l_2^2 (a + l_2^2)^-4 = (pi/16) a^(-5/2),
  // integral of (a + l_2^2)^-4 = (5 pi/16) a^(-7/2).
  TEST_CASE("derivative variances against closed forms") {
    const SmoothnessReport r = ms_derivative_report(reference(), kQuad);
    REQUIRE(r.directions[1].derivative_variance);
    CHECK(*r.directions[1].derivative_variance == Approx(std::numbers::pi / 12).epsilon(1e-6));
    REQUIRE(r.directions[0].derivative_variance);
    CHECK(*r.directions[0].derivative_variance == Approx(2 * std::numbers::pi / 3).epsilon(1e-6));
  }

  TEST_CASE("derivative covariance is even and peaks at zero") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double c0 = derivative_covariance(reference(), 1, std::vector<double>{0.0, 0.0}, kQuad);
    for (int i = 0; i < 5; ++i) {
      const std::vector<double> d{u(rng), u(rng)};
      const double a = derivative_covariance(reference(), 1, d, kQuad);
      const double b = derivative_covariance(reference(), 1, std::vector<double>{-d[0], -d[1]}, kQuad);
      CHECK(a == Approx(b).epsilon(1e-6));
      CHECK(std::abs(a) <= c0 * (1 + 1e-9));
    }
  }

  TEST_CASE("spectral and variogram second derivatives agree") {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    VariogramCache v(reference(), kQuad);
    const double h = 1e-2;
    for (int i = 0; i < 20; ++i) {
      const std::vector<double> d{u(rng), u(rng)};
      const double spectral = derivative_covariance(reference(), 1, d, kQuad);
      const auto fd = [&](double step) {
        const std::vector<double> p{d[0], d[1] + step}, m{d[0], d[1] - step};
        return 0.5 * (v(p) + v(m) - 2.0 * v(d)) / (step * step);
      };
      const double rich = (4.0 * fd(h) - fd(2.0 * h)) / 3.0;
      CHECK(rich == Approx(spectral).epsilon(0.01).scale(1e-3));
    }
  }

  TEST_CASE("first derivative of the variogram is odd") {
    CHECK(variogram_gradient(reference(), 1, std::vector<double>{0.3, 0.0}, kQuad) == 0.0);
    const double a = variogram_gradient(reference(), 1, std::vector<double>{0.3, 0.4}, kQuad);
    const double b = variogram_gradient(reference(), 1, std::vector<double>{-0.3, -0.4}, kQuad);
    CHECK(a > 0.0);
    CHECK(a == Approx(-b).epsilon(1e-6));
  }

  TEST_CASE("cross covariance identities") {
    const std::vector<double> zero{0.0, 0.0};
    CHECK(cross_covariance(reference(), 1, zero, zero, kQuad) == 0.0);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 5; ++i) {
      const std::vector<double> s{u(rng), u(rng)}, t{u(rng), u(rng)};
      const double lhs = cross_covariance(reference(), 1, t, s, kQuad) + cross_covariance(reference(), 1, s, t, kQuad);
      const double rhs = 0.5 * (variogram_gradient(reference(), 1, t, kQuad) + variogram_gradient(reference(), 1, s, kQuad));
      CHECK(lhs == Approx(rhs).epsilon(1e-6).scale(1e-9));
      CHECK(cross_covariance(reference(), 1, t, t, kQuad) ==
            Approx(0.5 * variogram_gradient(reference(), 1, t, kQuad)).epsilon(1e-12));
    }
  }

  TEST_CASE("cross covariance matrices") {
    const std::vector<double> zero{0.0, 0.0};
    const Eigen::Matrix2d z = cross_cov_matrix(reference(), 1, zero, zero, kQuad);
    CHECK(z(0, 0) == 0.0);
    CHECK(z(0, 1) == 0.0);
    CHECK(z(1, 0) == 0.0);
    CHECK(z(1, 1) == Approx(std::numbers::pi / 12).epsilon(1e-6));
    const std::vector<double> s{0.4, -0.2};
    const Eigen::Matrix2d d = cross_cov_matrix(reference(), 1, s, s, kQuad);
    CHECK(d(0, 0) >= 0.0);
    CHECK(d(1, 1) >= 0.0);
    const std::vector<std::vector<double>> sites{{0.3, 0.1}, {-0.5, 0.6}, {0.8, -0.7}};
    CHECK(cross_covariance_floor(reference(), 1, sites, kQuad) >= -1e-8);
    const Eigen::MatrixXd stacked = stacked_cross_covariance(reference(), 1, sites, kQuad);
    CHECK(stacked.rows() == 6);
    CHECK((stacked - stacked.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("the threshold is strict") {
    // beta = (1, 2): H_1 = (gamma - 1.5) / 2 equals 1 at gamma = 3.5.
    CHECK_FALSE(differentiability_verdicts(SpectralModel::canonical({1.0, 2.0}, 3.5 - 1e-6)).directions[0].exists_ms_partial);
    CHECK_FALSE(differentiability_verdicts(SpectralModel::canonical({1.0, 2.0}, 3.5)).directions[0].exists_ms_partial);
    CHECK(differentiability_verdicts(SpectralModel::canonical({1.0, 2.0}, 3.5 + 1e-6)).directions[0].exists_ms_partial);
  }

  TEST_CASE("rough directions are rejected") {
    CHECK_THROWS_AS(derivative_covariance(SpectralModel::fbm(0.5, 1), 0, std::vector<double>{0.0}, QuadratureSpec::defaults(1)),
                    ValidationError);
    CHECK_THROWS_AS(cross_covariance(SpectralModel::canonical({2.5, 1.0}, 2.4), 1, std::vector<double>{0.1, 0.1},
                                     std::vector<double>{0.2, 0.2}, kQuad),
                    ValidationError);
  }
}
