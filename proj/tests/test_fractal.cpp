#include <cmath>
#include <vector>

#include "anisofield/error.hpp"
#include "anisofield/fractal.hpp"
#include "doctest.h"

using namespace anisofield;
using doctest::Approx;

namespace {

// Direct transcription of the minimization, used as an independent oracle.
double brute_graph(const std::vector<double>& h, int p) {
  double best = 0.0;
  for (double x : h) best += 1.0 / x;
  const int n = static_cast<int>(h.size());
  for (int k = 1; k <= n; ++k) {
    double v = n - k + (1.0 - h[k - 1]) * p;
    for (int j = 1; j <= k; ++j) v += h[k - 1] / h[j - 1];
    best = std::min(best, v);
  }
  return best;
}

}  // namespace

TEST_SUITE("fractal") {
  TEST_CASE("clamping and ordering") {
    CHECK(clamp_exponents(make_exponents({1.25, 2.5})) == std::vector<double>{1.0, 1.0});
    CHECK(clamp_exponents(make_exponents({0.5, 0.75})) == std::vector<double>{0.5, 0.75});
    CHECK(clamp_exponents(make_exponents({0.75, 0.5})) == std::vector<double>{0.5, 0.75});
  }

  TEST_CASE("range dimension") {
    const std::vector<double> half{0.5, 0.5};
    CHECK(range_dimension(half, 3) == 3.0);
    CHECK(range_dimension(half, 5) == 4.0);
    CHECK(range_dimension(std::vector<double>{1.0, 1.0, 1.0}, 4) == 3.0);
  }

  TEST_CASE("graph dimension") {
    GraphDimension g = graph_dimension(std::vector<double>{0.5, 0.5}, 1);
    CHECK(g.value == Approx(2.5));
    g = graph_dimension(std::vector<double>{0.5, 1.0}, 1);
    CHECK(g.value == Approx(2.5));
    CHECK(g.argmin_k == 1);
    g = graph_dimension(std::vector<double>{0.5, 0.75, 0.75}, 1);
    CHECK(g.value == Approx(3.5));
    CHECK(g.argmin_k == 1);
    g = graph_dimension(std::vector<double>{0.5, 0.5}, 5);
    CHECK(g.value == Approx(4.0));
    CHECK(g.argmin_k == 0);
  }

  TEST_CASE("level set dimension") {
    LevelSetDimension l = level_set_dimension(std::vector<double>{0.5, 0.75, 0.75}, 1);
    CHECK(l.status == LevelStatus::Value);
    CHECK(l.value == Approx(2.5));
    l = level_set_dimension(std::vector<double>{0.5, 0.5}, 5);
    CHECK(l.status == LevelStatus::Empty);
    l = level_set_dimension(std::vector<double>{1.0, 1.0}, 1);
    CHECK(l.status == LevelStatus::Value);
    CHECK(l.value == Approx(1.0));
    l = level_set_dimension(std::vector<double>{0.5, 0.5}, 4);
    CHECK(l.status == LevelStatus::Undetermined);
    CHECK(to_string(LevelStatus::Undetermined) == "undetermined");
  }

  TEST_CASE("isotropic reductions") {
    for (int n = 1; n <= 3; ++n)
      for (double h : {0.2, 0.5, 0.9})
        for (int p = 1; p <= 6; ++p) {
          const std::vector<double> hb(n, h);
          CHECK(range_dimension(hb, p) == Approx(std::min<double>(p, n / h)).epsilon(1e-12));
          CHECK(graph_dimension(hb, p).value == Approx(std::min(n + (1 - h) * p, n / h)).epsilon(1e-12));
          if (p == 1) {
            CHECK(graph_dimension(hb, 1).value == Approx(n + 1 - h).epsilon(1e-12));
            CHECK(level_set_dimension(hb, 1).value == Approx(n - h).epsilon(1e-12));
          }
        }
  }

  TEST_CASE("scan against brute force, monotonicity, p = 1 identity") {
    const std::vector<double> levels{0.1, 0.3, 0.5, 0.7, 0.9, 1.0};
    for (double a : levels)
      for (double b : levels)
        for (double c : levels) {
          std::vector<double> h{a, b, c};
          std::sort(h.begin(), h.end());
          for (int p = 1; p <= 6; ++p) {
            const double g = graph_dimension(h, p).value;
            CHECK(g == Approx(brute_graph(h, p)).epsilon(1e-12));
            CHECK(range_dimension(h, p + 1) >= range_dimension(h, p));
            for (int j = 0; j < 3; ++j) {
              std::vector<double> up = h;
              up[j] = std::min(1.0, up[j] + 0.05);
              std::sort(up.begin(), up.end());
              CHECK(graph_dimension(up, p).value <= g + 1e-12);
            }
          }
          if (h[0] < 1.0) CHECK(graph_dimension(h, 1).value == Approx(4.0 - h[0]).epsilon(1e-12));
        }
  }

  TEST_CASE("dimension report from exponents") {
    const DimensionReport r = dimension_report(make_exponents({0.75, 0.5}), 1);
    CHECK(r.h_bar_sorted == std::vector<double>{0.5, 0.75});
    CHECK(r.range_dim == 1.0);
    CHECK(r.graph.value == Approx(2.5));
    CHECK(r.level.value == Approx(1.5));
    CHECK(r.provenance == "generic");
  }

  TEST_CASE("gneiting closed forms") {
    GneitingModel gm;
    gm.d = 2;
    gm.alpha = 0.5;
    gm.gamma = 0.75;
    const DimensionReport r = gneiting_dimensions(gm, 1);
    CHECK(r.graph.value == Approx(3.5));
    CHECK(r.level.value == Approx(2.5));
    CHECK(r.range_dim == 1.0);
    REQUIRE(r.piecewise_graph);
    CHECK(*r.piecewise_graph == Approx(3.5));
    CHECK(gneiting_range_closed_form(2, 0.5, 0.75, 8) == Approx(2.0 / 0.75 + 2.0));
    CHECK(gneiting_graph_closed_form(2, 0.5, 0.75, 1) == Approx(3.5));
    CHECK(gneiting_level_closed_form(2, 0.5, 0.75, 1).value == Approx(2.5));

    gm.gamma = 1.0;
    const DimensionReport edge = gneiting_dimensions(gm, 1);
    CHECK_FALSE(edge.piecewise_graph);
    CHECK(edge.provenance != "closed-form");
  }

  TEST_CASE("hurst estimates from simulated fields") {
    std::vector<FieldSample> rough, aniso0, aniso1;
    const SpectralModel fbm = SpectralModel::fbm(0.5, 1);
    const SpectralModel m = SpectralModel::canonical({1.0, 1.5}, 8.0 / 3.0);
    const SpectralModel smooth = SpectralModel::canonical({1.0, 2.0}, 4.0);
    std::vector<FieldSample> sm;
    for (int s = 0; s < 20; ++s) {
      rough.push_back(sample_field(fbm, Grid::parse("0:1:257"), 512, 40 + s));
      aniso1.push_back(sample_field(m, Grid::parse("0:0:1,0:1:129"), 128, 80 + s));
      sm.push_back(sample_field(smooth, Grid::parse("0:0:1,0:1:129"), 128, 120 + s));
    }
    CHECK(estimate_hurst(rough, 0).estimate == Approx(0.5).epsilon(0.2));
    CHECK(estimate_hurst(aniso1, 1).estimate == Approx(0.75).epsilon(0.1 / 0.75));
    const HurstEstimate e = estimate_hurst(sm, 1);
    CHECK(e.estimate >= 0.9);
    CHECK(e.saturated);
    CHECK(e.lags == 16);
    CHECK(e.std_error >= 0.0);

    FieldSample flat;
    flat.grid = Grid::parse("0:1:65");
    flat.values.assign(65, 0.0);
    CHECK_THROWS_AS(estimate_hurst(flat, 0), NumericalError);
    flat.grid = Grid::parse("0:1:9");
    flat.values.assign(9, 1.0);
    CHECK_THROWS_AS(estimate_hurst(flat, 0), ValidationError);
  }
}
