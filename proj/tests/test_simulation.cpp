#include <cmath>
#include <numeric>
#include <vector>

#include "anisofield/error.hpp"
#include "anisofield/parallel.hpp"
#include "anisofield/simulation.hpp"
#include "doctest.h"

using namespace anisofield;
using doctest::Approx;

namespace {

constexpr int kSeeds = 500;

// 500 Brownian paths on [0, 1] with step 1/64, shared by several cases.
const std::vector<FieldSample>& brownian_paths() {
  static const std::vector<FieldSample> paths = [] {
    const SpectralModel m = SpectralModel::fbm(0.5, 1);
    const Grid g = Grid::parse("0:1:65");
    std::vector<FieldSample> out;
    for (int s = 0; s < kSeeds; ++s) out.push_back(sample_field(m, g, 256, 7000 + s));
    return out;
  }();
  return paths;
}

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

TEST_SUITE("simulation") {
  TEST_CASE("grid parsing") {
    const Grid g = Grid::parse("0:1:65,-2:2:5");
    CHECK(g.dims() == 2);
    CHECK(g.points() == 325);
    CHECK(g.spacing[0] == Approx(1.0 / 64));
    CHECK(g.coordinate(1, 4) == Approx(2.0));
    const std::vector<double> p = g.point(5 * 64 + 4);
    CHECK(p[0] == Approx(1.0));
    CHECK(p[1] == Approx(2.0));
    const Grid single = Grid::parse("0.5:0.5:1");
    CHECK(single.points() == 1);
    CHECK(single.origin[0] == 0.5);
    CHECK_THROWS_AS(Grid::parse("0:1"), ValidationError);
    CHECK_THROWS_AS(Grid::parse("0:x:4"), ValidationError);
    CHECK_THROWS_AS(Grid::parse("1:0:4"), ValidationError);
    CHECK_THROWS_AS(Grid::parse("0:1:0"), ValidationError);
    CHECK_THROWS_AS(Grid::parse("0:1:2048,0:1:1024"), ValidationError);
  }

  TEST_CASE("the origin is pinned exactly") {
    const SpectralModel m = SpectralModel::canonical({1.0, 2.0}, 4.0);
    const FieldSample fs = sample_field(m, Grid::parse("-1:1:9,-1:1:9"), 64, 3);
    CHECK(fs.at(0, 4 * 9 + 4) == 0.0);
    for (const FieldSample& path : brownian_paths()) CHECK(path.at(0, 0) == 0.0);
  }

  TEST_CASE("mean square of X(1) matches v(1)") {
    double sum = 0.0;
    for (const FieldSample& path : brownian_paths()) sum += path.at(0, 64) * path.at(0, 64);
    CHECK(sum / kSeeds == Approx(1.0).epsilon(0.1));
  }

  TEST_CASE("different seeds give uncorrelated fields") {
    const auto& paths = brownian_paths();
    for (int k = 0; k < 10; ++k) {
      // Increments, since levels of a random walk are strongly autocorrelated.
      std::vector<double> a, b;
      for (std::size_t i = 1; i < 65; ++i) {
        a.push_back(paths[2 * k].at(0, i) - paths[2 * k].at(0, i - 1));
        b.push_back(paths[2 * k + 1].at(0, i) - paths[2 * k + 1].at(0, i - 1));
      }
      CHECK(std::abs(correlation(a, b)) < 0.4);
    }
    std::vector<double> a, b;
    for (int s = 0; s < kSeeds / 2; ++s) {
      a.push_back(paths[2 * s].at(0, 32));
      b.push_back(paths[2 * s + 1].at(0, 32));
    }
    CHECK(std::abs(correlation(a, b)) < 0.2);
  }

  TEST_CASE("empirical variogram of brownian paths") {
    const VariogramTable t = empirical_variogram(brownian_paths(), 0, 16);
    REQUIRE(t.values.size() == 16);
    std::vector<double> x, y;
    for (std::size_t l = 1; l <= 16; ++l) {
      const double h = l / 64.0;
      CHECK(t.values[l - 1] / h == Approx(1.0).epsilon(0.1));
      CHECK(t.pair_counts[l - 1] == kSeeds * (65 - l));
      x.push_back(std::log(h));
      y.push_back(std::log(t.values[l - 1]));
    }
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sxy += (x[i] - mx) * (y[i] - my);
      sxx += (x[i] - mx) * (x[i] - mx);
    }
    CHECK(sxy / sxx == Approx(1.0).epsilon(0.1));
    CHECK_FALSE(t.sparse_warning);
  }

  TEST_CASE("empirical variogram edge cases") {
    FieldSample zero;
    zero.grid = Grid::parse("0:1:11");
    zero.values.assign(11, 0.0);
    const VariogramTable t = empirical_variogram(zero, 0, 5);
    for (double v : t.values) CHECK(v == 0.0);
    CHECK(t.sparse_warning);
    CHECK_THROWS_AS(empirical_variogram(zero, 0, 11), ValidationError);
    CHECK_THROWS_AS(empirical_variogram(zero, 1, 2), ValidationError);
  }

  TEST_CASE("channels come from independent reproducible streams") {
    const SpectralModel m = SpectralModel::fbm(0.3, 2);
    const Grid g = Grid::parse("0:1:9,0:1:9");
    const FieldSample joint = multi_copy_field(m, g, 32, 3, 99);
    CHECK(joint.channels == 3);
    for (int c = 0; c < 3; ++c) {
      const FieldSample alone = sample_channel(m, g, 32, 99, c);
      for (std::size_t i = 0; i < g.points(); ++i) CHECK(alone.at(0, i) == joint.at(c, i));
    }
    const FieldSample single = multi_copy_field(m, g, 32, 1, 99);
    const FieldSample plain = sample_field(m, g, 32, 99);
    CHECK(single.values == plain.values);
    CHECK(joint.at(0, 40) != joint.at(1, 40));
  }

  TEST_CASE("cross-channel correlation at a fixed site") {
    const SpectralModel m = SpectralModel::fbm(0.7, 1);
    const Grid g = Grid::parse("0:1:5");
    std::vector<double> a, b;
    for (int s = 0; s < kSeeds; ++s) {
      const FieldSample fs = multi_copy_field(m, g, 64, 2, 100 + s);
      a.push_back(fs.at(0, 4));
      b.push_back(fs.at(1, 4));
    }
    CHECK(std::abs(correlation(a, b)) < 0.15);
  }

  TEST_CASE("output is identical on 1 and 8 threads") {
    const SpectralModel m = SpectralModel::canonical({1.0, 2.0}, 4.0);
    const Grid g = Grid::parse("0:1:17,0:1:17");
    set_thread_limit(1);
    const FieldSample a = multi_copy_field(m, g, 64, 2, 5);
    set_thread_limit(8);
    const FieldSample b = multi_copy_field(m, g, 64, 2, 5);
    set_thread_limit(0);
    CHECK(a.values == b.values);
    CHECK(a.synthesis.cells == b.synthesis.cells);
  }

  TEST_CASE("lattice cap and preconditions") {
    const SpectralModel m = SpectralModel::canonical({1.0, 2.0}, 4.0);
    CHECK_THROWS_AS(sample_field(m, Grid::parse("0:1:4,0:1:4"), 8192, 1), ValidationError);
    CHECK_THROWS_AS(sample_field(m, Grid::parse("0:1:4,0:1:4"), 8, 1), ValidationError);
    CHECK_THROWS_AS(sample_field(m, Grid::parse("0:1:4"), 64, 1), ValidationError);
    CHECK_THROWS_AS(multi_copy_field(m, Grid::parse("0:1:4,0:1:4"), 64, 0, 1), ValidationError);
  }

  TEST_CASE("anderson-darling matches a reference implementation") {
    std::vector<double> x;
    for (int i = 0; i < 40; ++i) x.push_back(std::sin(1.7 * i) + std::fmod(0.1 * i, 0.7));
    // scipy.stats.anderson gives A^2 = 0.6150657628929039; times (1 + 0.75/n + 2.25/n^2).
    CHECK(anderson_darling(x) == Approx(0.6274631821762141).epsilon(1e-10));
    std::vector<double> skewed;
    for (int i = 1; i <= 200; ++i) skewed.push_back(std::pow(i / 201.0, 6.0));
    CHECK_FALSE(passes_normality(skewed));
    CHECK_THROWS_AS(anderson_darling(std::vector<double>(10, 1.0)), NumericalError);
  }

  TEST_CASE("values at a fixed site are gaussian") {
    std::vector<double> v;
    for (const FieldSample& path : brownian_paths()) v.push_back(path.at(0, 20));
    CHECK(passes_normality(v));
  }

  TEST_CASE("exact sampler for the gneiting model") {
    GneitingModel gm;
    gm.d = 1;
    gm.sigma2 = 2.0;
    gm.alpha = 0.5;
    gm.beta = 1.0;
    gm.gamma = 0.75;
    const Grid single = Grid::parse("0.3:0.3:1,0:0:1");
    std::vector<double> draws;
    for (int s = 0; s < 2000; ++s) draws.push_back(sample_stationary_exact(gm, single, s).at(0, 0));
    double ss = 0.0;
    for (double d : draws) ss += d * d;
    CHECK(ss / draws.size() == Approx(2.0).epsilon(0.1));

    const Grid g = Grid::parse("0:1:4,0:1:3");
    std::vector<double> sum2(g.points(), 0.0);
    for (int s = 0; s < kSeeds; ++s) {
      const FieldSample fs = sample_stationary_exact(gm, g, 300 + s);
      CHECK(fs.synthesis.method == "exact-cholesky");
      for (std::size_t i = 0; i < g.points(); ++i) sum2[i] += fs.at(0, i) * fs.at(0, i);
    }
    for (double s2 : sum2) CHECK(s2 / kSeeds == Approx(2.0).epsilon(0.15));

    const FieldSample pinned = sample_stationary_exact(gm, g, 17, true);
    CHECK(pinned.at(0, 0) == 0.0);
    const FieldSample raw = sample_stationary_exact(gm, g, 17, false);
    CHECK(raw.values == sample_stationary_exact(gm, g, 17, false).values);
    CHECK_THROWS_AS(sample_stationary_exact(gm, Grid::parse("0:1:100,0:1:100"), 1), ValidationError);
    CHECK_THROWS_AS(sample_stationary_exact(gm, Grid::parse("0:1:4"), 1), ValidationError);
  }

  TEST_CASE("difference quotients separate smooth and rough directions") {
    // H = (1.25, 0.5): beta = (2.5, 1), gamma = 2.4.
    const SpectralModel m = SpectralModel::canonical({2.5, 1.0}, 2.4);
    const std::vector<double> steps{1.0 / 64, 1.0 / 32, 1.0 / 16, 1.0 / 8};
    std::vector<double> smooth(steps.size(), 0.0), rough(steps.size(), 0.0);
    const Grid ax0 = Grid::parse("0:0.125:9,0:0:1");
    const Grid ax1 = Grid::parse("0:0:1,0:0.125:9");
    const int seeds = 300;
    for (int s = 0; s < seeds; ++s) {
      const FieldSample a = sample_field(m, ax0, 128, 9000 + s);
      const FieldSample b = sample_field(m, ax1, 128, 9000 + s);
      for (std::size_t k = 0; k < steps.size(); ++k) {
        const std::size_t idx = std::size_t{1} << k;
        smooth[k] += std::pow(a.at(0, idx) / steps[k], 2);
        rough[k] += std::pow(b.at(0, idx) / steps[k], 2);
      }
    }
    for (std::size_t k = 0; k + 1 < steps.size(); ++k) {
      const double r = smooth[k] / smooth[k + 1];
      CHECK(r < 2.0);
      CHECK(r > 0.5);
    }
    const double slope = std::log(rough.back() / rough.front()) / std::log(steps.back() / steps.front());
    CHECK(slope == Approx(-1.0).epsilon(0.2));
  }
}
