#include <cmath>
#include <random>

#include "anisofield/error.hpp"
#include "anisofield/gneiting.hpp"
#include "doctest.h"

using namespace anisofield;
using doctest::Approx;

namespace {
GneitingModel unit_model() {
  GneitingModel gm;
  gm.d = 1;
  gm.alpha = gm.beta = gm.gamma = 1.0;
  return gm;
}
}  // namespace

TEST_SUITE("gneiting") {
  TEST_CASE("covariance values") {
    GneitingModel gm = unit_model();
    gm.sigma2 = 2.5;
    CHECK(gneiting_covariance(gm, std::vector<double>{0.0}, 0.0) == 2.5);
    gm.sigma2 = 1.0;
    CHECK(gneiting_covariance(gm, std::vector<double>{1.0}, 0.0) == Approx(std::exp(-1.0)));
    CHECK(gneiting_covariance(gm, std::vector<double>{0.0}, 1.0) == Approx(std::sqrt(0.5)));
  }

  TEST_CASE("temporal exponent uses the spatial dimension") {
    GneitingModel gm = unit_model();
    gm.d = 3;
    CHECK(gneiting_covariance(gm, std::vector<double>{0.0, 0.0, 0.0}, 1.0) == Approx(std::pow(2.0, -1.5)));
    CHECK(gneiting_to_json(gm)["temporal_exponent"] == "beta*d/2");
  }

  TEST_CASE("increment variance") {
    const GneitingModel gm = unit_model();
    const std::vector<double> x{0.4};
    CHECK(gneiting_increment_variance(gm, x, 0.3, x, 0.3) == 0.0);
    CHECK(gneiting_increment_variance(gm, std::vector<double>{1.0}, 0.0, std::vector<double>{0.0}, 0.0) ==
          Approx(2.0 * (1.0 - std::exp(-1.0))));
  }

  TEST_CASE("covariance is bounded by the variance") {
    GneitingModel gm;
    gm.d = 2;
    gm.sigma2 = 1.7;
    gm.alpha = 0.4;
    gm.beta = 0.6;
    gm.gamma = 0.8;
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 200; ++i) {
      const double c = gneiting_covariance(gm, std::vector<double>{u(rng), u(rng)}, u(rng));
      CHECK(std::abs(c) <= gm.sigma2);
    }
  }

  TEST_CASE("small-lag increment variance follows the additive shape") {
    GneitingModel gm;
    gm.d = 2;
    gm.alpha = 0.5;
    gm.beta = 0.8;
    gm.gamma = 0.75;
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> logu(std::log(1e-3), std::log(1e-1));
    std::uniform_real_distribution<double> pos(-1.0, 1.0);
    double lo = INFINITY, hi = 0.0;
    for (int i = 0; i < 200; ++i) {
      const std::vector<double> x{pos(rng), pos(rng)};
      const double t = pos(rng);
      const double dx0 = std::exp(logu(rng)), dx1 = std::exp(logu(rng)), dt = std::exp(logu(rng));
      const std::vector<double> y{x[0] + dx0, x[1] - dx1};
      const double v = gneiting_increment_variance(gm, x, t, y, t + dt);
      const double shape = std::pow(std::hypot(dx0, dx1), 2 * gm.gamma) + std::pow(dt, 2 * gm.alpha);
      lo = std::min(lo, v / shape);
      hi = std::max(hi, v / shape);
    }
    CHECK(lo > 0.0);
    CHECK(hi / lo < 10.0);
  }

  TEST_CASE("parameter validation and json") {
    GneitingModel gm = unit_model();
    gm.alpha = 1.2;
    CHECK_THROWS_AS(gm.validate(), ValidationError);
    gm = unit_model();
    gm.c = 0.0;
    CHECK_THROWS_AS(gm.validate(), ValidationError);
    gm = unit_model();
    gm.d = 2;
    gm.a = 0.3;
    const GneitingModel back = gneiting_from_json(gneiting_to_json(gm));
    CHECK(back.d == 2);
    CHECK(back.a == 0.3);
    CHECK_THROWS_AS(gneiting_from_json(nlohmann::json{{"sigma2", 1.0}}), ValidationError);
    CHECK_THROWS_AS(gneiting_from_json(nlohmann::json{{"d", 1}, {"bogus", 1.0}}), ValidationError);
  }
}
