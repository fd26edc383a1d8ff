#include "anisofield/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <numbers>
#include <random>
#include <sstream>

#include "anisofield/error.hpp"
#include "anisofield/fractal.hpp"
#include "anisofield/kriging.hpp"
#include "anisofield/simulation.hpp"
#include "anisofield/smoothness.hpp"
#include "anisofield/spectral_models.hpp"
#include "anisofield/variogram.hpp"

namespace anisofield {
namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// Collects sub-checks; the criterion passes only if every one does.
struct Checks {
  bool ok = true;
  std::ostringstream notes;

  void add(bool pass, const std::string& what) {
    ok = ok && pass;
    if (notes.tellp() > 0) notes << "; ";
    notes << what << (pass ? "" : " [FAILED]");
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// 1. Normalized fBm densities reproduce |h|^(2H).
void fbm_round_trip(Checks& c) {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int dims : {1, 2}) {
    for (double h : {0.3, 0.5, 0.7}) {
      const SpectralModel m = SpectralModel::fbm(h, dims);
      const QuadratureSpec q = QuadratureSpec::defaults(dims);
      for (int i = 0; i < 20; ++i) {
        const double r = 0.1 * std::pow(20.0, i / 19.0);
        const double theta = i * 2.399963229728653;
        std::vector<double> lag(dims);
        lag[0] = dims == 1 ? r : r * std::cos(theta);
        if (dims == 2) lag[1] = r * std::sin(theta);
        const double v = variogram_numeric(m, lag, q).value;
        worst = std::max(worst, std::abs(v / std::pow(r, 2.0 * h) - 1.0));
      }
    }
  }
  const double secs = seconds_since(t0);
  c.add(worst < 1e-2, "max rel err " + fmt("%.2e", worst) + " over 120 lags (limit 1e-2)");
  c.add(secs < 60.0, "runtime " + fmt("%.1f", secs) + " s (limit 60 s)");
}

// 2. Exponent identity and the integrability boundary.
void exponent_identity(Checks& c) {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> ub(0.3, 4.0), ug(1e-3, 5.0);
  std::uniform_int_distribution<int> un(1, 5);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> beta(un(rng));
    double s = 0.0;
    for (double& b : beta) {
      b = ub(rng);
      s += 1.0 / b;
    }
    const double gamma = s + ug(rng);
    const SmoothnessExponents ex = smoothness_exponents(SpectralModel::canonical(beta, gamma));
    double inv = 0.0;
    for (double b : beta) inv += 1.0 / b;
    const double lhs = 0.5 * (gamma - inv) * (2.0 + ex.q);
    worst = std::max(worst, std::abs(lhs - gamma) / gamma);
  }
  c.add(worst <= 1e-12, "identity max rel err " + fmt("%.1e", worst) + " over 1000 draws");

  // beta = (1, 2): the threshold is 1.5.
  for (double gamma : {1.2, 1.5, 2.5}) {
    const SpectralModel m = SpectralModel::canonical({1.0, 2.0}, gamma);
    const double m1 = partial_spectral_mass(m, 10.0);
    const double m2 = partial_spectral_mass(m, 100.0);
    const double m3 = partial_spectral_mass(m, 1000.0);
    const double ratio = (m3 - m2) / (m2 - m1);
    const bool legit = legitimacy_check(m).legitimate;
    const bool divergent = m1 < m2 && m2 < m3 && ratio >= 0.5;
    c.add(divergent != legit, "gamma " + fmt("%.1f", gamma) + ": masses " + fmt("%.4g", m1) + "/" + fmt("%.4g", m2) +
                                  "/" + fmt("%.4g", m3) + ", decade ratio " + fmt("%.3f", ratio) +
                                  (legit ? " (convergent)" : " (divergent)"));
  }
}

// 3. Empirical variograms of synthesized fields against quadrature.
void simulation_consistency(Checks& c) {
  const auto t0 = Clock::now();
  constexpr int kReal = 500;
  auto compare = [&](const SpectralModel& m, const Grid& g, int axis, const std::string& label) {
    // The jittered lattice is unbiased at any size; 2-D keeps it small for speed.
    const std::size_t lattice = m.dims() == 1 ? 1024 : 128;
    std::vector<FieldSample> fields;
    fields.reserve(kReal);
    for (int r = 0; r < kReal; ++r) fields.push_back(sample_field(m, g, lattice, 1000 + r));
    const VariogramTable emp = empirical_variogram(fields, axis, g.shape[axis] / 4);
    const QuadratureSpec q = QuadratureSpec::defaults(m.dims());
    double worst = 0.0;
    for (std::size_t i = 0; i < emp.values.size(); ++i) {
      const double ref = variogram_numeric(m, emp.lags[i], q).value;
      worst = std::max(worst, std::abs(emp.values[i] / ref - 1.0));
    }
    c.add(worst < 0.10, label + " " + fmt("%.3f", worst));
  };
  for (double h : {0.3, 0.5, 0.7}) {
    Grid g{{0.0}, {1.0 / 64}, {64}};
    compare(SpectralModel::fbm(h, 1), g, 0, "fbm H=" + fmt("%.1f", h));
  }
  const SpectralModel canon = SpectralModel::canonical({1.0, 2.0}, 4.0);
  compare(canon, Grid{{0.0, 0.0}, {0.25, 1.0}, {64, 1}}, 0, "canonical axis 1");
  compare(canon, Grid{{0.0, 0.0}, {1.0, 0.25}, {1, 64}}, 1, "canonical axis 2");
  const double secs = seconds_since(t0);
  c.notes << " (max rel err per case, limit 0.10)";
  c.add(secs < 300.0, "runtime " + fmt("%.1f", secs) + " s (limit 300 s)");
}

// 4. Kriging oracles, interpolation and variance scaling.
void kriging_oracles(Checks& c) {
  const SpectralModel bm = SpectralModel::fbm(0.5, 1);
  const QuadratureSpec q1 = QuadratureSpec::defaults(1);
  const double z = 0.7;
  const Observations one{{{1.0}}, {z}};
  const std::vector<double> u2{2.0}, uh{0.5};
  const KrigingResult r2 = krige(bm, one, u2, q1);
  const KrigingResult rh = krige(bm, one, uh, q1);
  c.add(std::abs(r2.variance - 1.0) <= 1e-6 && std::abs(r2.prediction - z) <= 1e-6,
        "Var(X(2)|X(1)) = " + fmt("%.10f", r2.variance));
  c.add(std::abs(rh.variance - 0.25) <= 1e-6 && std::abs(rh.prediction - 0.5 * z) <= 1e-6,
        "Var(X(0.5)|X(1)) = " + fmt("%.10f", rh.variance));

  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> pos(-2.0, 2.0);
  std::normal_distribution<double> val;
  double worst_res = 0.0, worst_var = 0.0;
  for (int cfg = 0; cfg < 50; ++cfg) {
    const bool planar = cfg % 5 == 4;
    const SpectralModel m = planar ? SpectralModel::canonical({1.0, 1.5}, 8.0 / 3.0)
                                   : SpectralModel::fbm(0.3 + 0.2 * (cfg % 3), 1);
    const int dims = m.dims();
    const int n = planar ? 2 + cfg % 4 : 1 + cfg % 12;
    Observations obs;
    while (static_cast<int>(obs.sites.size()) < n) {
      std::vector<double> s(dims);
      for (double& x : s) x = pos(rng);
      bool far = std::sqrt(std::inner_product(s.begin(), s.end(), s.begin(), 0.0)) > 0.05;
      for (const auto& t : obs.sites) {
        double d2 = 0.0;
        for (int j = 0; j < dims; ++j) d2 += (s[j] - t[j]) * (s[j] - t[j]);
        far = far && std::sqrt(d2) > 0.05;
      }
      if (!far) continue;
      obs.sites.push_back(s);
      obs.values.push_back(val(rng));
    }
    SimpleKriging k(m, obs, QuadratureSpec::defaults(dims));
    for (int i = 0; i < n; ++i) {
      const KrigingResult r = k.predict(obs.sites[i]);
      worst_res = std::max(worst_res, std::abs(r.prediction - obs.values[i]));
      worst_var = std::max(worst_var, r.variance);
    }
  }
  c.add(worst_res <= 1e-8 && worst_var <= 1e-8,
        "interpolation residual " + fmt("%.1e", worst_res) + ", variance " + fmt("%.1e", worst_var) + " over 50 configs");

  const std::vector<double> radii{1e-5, 3.1622776601683795e-5, 1e-4, 3.1622776601683795e-4, 1e-3};
  const SpectralModel aniso = SpectralModel::canonical({1.0, 1.5}, 8.0 / 3.0);
  const QuadratureSpec q2 = QuadratureSpec::defaults(2);
  for (int axis : {0, 1}) {
    const double target = 2.0 * smoothness_exponents(aniso).h[axis];
    const double slope = scaling_exponent_check(aniso, axis, radii, q2);
    c.add(std::abs(slope - target) <= 0.15,
          "slope axis " + std::to_string(axis + 1) + " " + fmt("%.4f", slope) + " vs " + fmt("%.2f", target));
  }
}

// 5. Closed-form dimension tables against generic minimization.
void dimension_tables(Checks& c) {
  int tuples = 0, a_le_g = 0, g_le_a = 0;
  double worst = 0.0;
  bool status_ok = true;
  for (int d = 1; d <= 3; ++d) {
    for (int ia = 1; ia <= 9; ++ia) {
      for (int ig = 1; ig <= 9; ++ig) {
        for (int p = 1; p <= 8; ++p) {
          GneitingModel gm;
          gm.d = d;
          gm.alpha = ia / 10.0;
          gm.gamma = ig / 10.0;
          const DimensionReport rep = gneiting_dimensions(gm, p);
          ++tuples;
          if (gm.alpha <= gm.gamma) ++a_le_g;
          if (gm.gamma <= gm.alpha) ++g_le_a;
          worst = std::max(worst, std::abs(*rep.piecewise_range - rep.range_dim));
          worst = std::max(worst, std::abs(*rep.piecewise_graph - rep.graph.value));
          status_ok = status_ok && rep.piecewise_level->status == rep.level.status;
          if (rep.level.status == LevelStatus::Value)
            worst = std::max(worst, std::abs(rep.piecewise_level->value - rep.level.value));
        }
      }
    }
  }
  c.add(worst <= 1e-12 && status_ok && a_le_g > 0 && g_le_a > 0,
        std::to_string(tuples) + " tuples (" + std::to_string(a_le_g) + " with alpha<=gamma, " +
            std::to_string(g_le_a) + " with gamma<=alpha), max diff " + fmt("%.1e", worst));

  double fbm_worst = 0.0;
  for (int n = 1; n <= 3; ++n) {
    for (int ih = 1; ih <= 9; ++ih) {
      const double h = ih / 10.0;
      const std::vector<double> hb(n, h);
      for (int p = 1; p <= 8; ++p) {
        fbm_worst = std::max(fbm_worst, std::abs(range_dimension(hb, p) - std::min<double>(p, n / h)));
        fbm_worst = std::max(fbm_worst, std::abs(graph_dimension(hb, p).value - std::min(n + (1 - h) * p, n / h)));
      }
      fbm_worst = std::max(fbm_worst, std::abs(graph_dimension(hb, 1).value - (n + 1 - h)));
      const LevelSetDimension lv = level_set_dimension(hb, 1);
      fbm_worst = std::max(fbm_worst, lv.status == LevelStatus::Value ? std::abs(lv.value - (n - h)) : 1.0);
    }
  }
  c.add(fbm_worst <= 1e-12, "isotropic reductions max diff " + fmt("%.1e", fbm_worst));
}

// 6. Differentiability thresholds.
void smoothness_thresholds(Checks& c) {
  // Powers of two and quarter steps keep both sides of each inequality exact.
  const std::vector<double> alphas{0.5, 1.0, 2.0, 4.0};
  int scanned = 0, illegit = 0, fractal = 0, smooth = 0, boundary = 0, mismatches = 0;
  for (int n = 1; n <= 3; ++n) {
    std::vector<std::size_t> idx(n, 0);
    while (true) {
      std::vector<double> al(n);
      for (int j = 0; j < n; ++j) al[j] = alphas[idx[j]];
      double inv = 0.0, amin = al[0];
      for (double a : al) {
        inv += 1.0 / a;
        amin = std::min(amin, a);
      }
      for (int k = 1; k <= 24; ++k) {
        const double nu = 0.25 * k;
        const SpectralModel m = SpectralModel::stein(nu, std::vector<double>(n, 1.0), std::vector<double>(n, 1.0), al);
        ++scanned;
        const bool legit_rule = inv < 2.0 * nu;
        if (legitimacy_check(m).legitimate != legit_rule) ++mismatches;
        if (!legit_rule) {
          ++illegit;
          continue;
        }
        const double rhs = inv + 2.0 / amin;
        if (2.0 * nu == rhs) ++boundary;
        const bool diff_rule = 2.0 * nu > rhs;
        diff_rule ? ++smooth : ++fractal;
        if (differentiability_verdicts(m).ms_differentiable != diff_rule) ++mismatches;
      }
      int j = 0;
      while (j < n && ++idx[j] == alphas.size()) idx[j++] = 0;
      if (j == n) break;
    }
  }
  c.add(mismatches == 0 && illegit > 0 && fractal > 0 && smooth > 0 && boundary > 0,
        std::to_string(scanned) + " Stein models (" + std::to_string(illegit) + " illegitimate, " +
            std::to_string(fractal) + " fractal incl. " + std::to_string(boundary) + " on the boundary, " +
            std::to_string(smooth) + " differentiable), " + std::to_string(mismatches) + " mismatches");

  const SpectralModel stein = SpectralModel::stein(3.0, {1.0, 1.0}, {1.0, 1.0}, {1.0, 2.0});
  const SmoothnessReport rep = ms_derivative_report(stein, QuadratureSpec::defaults(2));
  bool variances = rep.ms_differentiable;
  for (const auto& d : rep.directions) variances = variances && d.derivative_variance && *d.derivative_variance > 0.0;
  c.add(variances, "differentiable Stein model has finite derivative variances");

  // beta = (2, 2): H_j = gamma - 1, so gamma = 2 is the boundary.
  auto verdict = [](double gamma) {
    const SmoothnessReport r = differentiability_verdicts(SpectralModel::canonical({2.0, 2.0}, gamma));
    return r.directions[0].exists_ms_partial && r.directions[1].exists_ms_partial;
  };
  const bool below = verdict(2.0 - 1e-6), at = verdict(2.0), above = verdict(2.0 + 1e-6);
  c.add(!below && !at && above, std::string("gamma 2-1e-6/2/2+1e-6 -> ") + (below ? "T" : "F") + (at ? "T" : "F") +
                                    (above ? "T" : "F"));
}

// 7. Spectral derivative covariance against finite differences of v.
void derivative_consistency(Checks& c) {
  const SpectralModel m = SpectralModel::canonical({1.0, 2.0}, 4.0);
  const QuadratureSpec q = QuadratureSpec::defaults(2);
  const SmoothnessExponents ex = smoothness_exponents(m);
  const std::vector<double> zero{0.0, 0.0};
  for (int j : {1, 0}) {
    const double spectral = derivative_covariance(m, j, zero, q);
    // v(h e_j) / h^2 = C_j(0) + O(h^p); one Richardson step removes the leading term.
    const double p = std::min(2.0, 2.0 * ex.h[j] - 2.0);
    auto quotient = [&](double h) {
      std::vector<double> lag{0.0, 0.0};
      lag[j] = h;
      return variogram_numeric(m, lag, q).value / (h * h);
    };
    const double d1 = quotient(1e-2), d2 = quotient(1e-3);
    const double ratio = std::pow(10.0, p);
    const double fd = (ratio * d2 - d1) / (ratio - 1.0);
    const double rel = std::abs(fd / spectral - 1.0);
    c.add(rel < 0.01, "axis " + std::to_string(j + 1) + " spectral " + fmt("%.8g", spectral) + " vs FD " +
                          fmt("%.8g", fd) + " (rel " + fmt("%.1e", rel) + ")");
  }
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::vector<double>> sites(3, std::vector<double>(2));
  for (auto& s : sites)
    for (double& x : s) x = u(rng);
  for (int j : {1, 0}) {
    double floor;
    try {
      floor = cross_covariance_floor(m, j, sites, q);
    } catch (const NumericalError& e) {
      floor = e.residual();
    }
    c.add(floor >= -1e-8, "stacked V_" + std::to_string(j + 1) + " eigenvalue floor " + fmt("%.3e", floor));
  }
}

// 8. Normalized modulus of continuity is stable under refinement.
void modulus_surrogate(Checks& c) {
  constexpr int kSeeds = 20;
  for (double h : {0.3, 0.5, 0.7}) {
    const SpectralModel m = SpectralModel::fbm(h, 1);
    const SmoothnessExponents ex = smoothness_exponents(m);
    const Grid fine{{0.0}, {1.0 / 256}, {256}};
    double sum_coarse = 0.0, sum_fine = 0.0, worst_seed = 0.0;
    for (int s = 0; s < kSeeds; ++s) {
      const FieldSample fs = sample_field(m, fine, 1024, 5000 + s);
      auto sup = [&](std::size_t step) {
        double best = 0.0;
        for (std::size_t a = 0; a < fine.shape[0]; a += step)
          for (std::size_t b = a + step; b < fine.shape[0]; b += step) {
            const double eps = (b - a) * fine.spacing[0];
            best = std::max(best, std::abs(fs.values[b] - fs.values[a]) / modulus_envelope(ex, std::vector<double>{eps}));
          }
        return best;
      };
      const double sc = sup(4), sf = sup(1);
      sum_coarse += sc;
      sum_fine += sf;
      worst_seed = std::max(worst_seed, sf / sc);
    }
    const double ratio = sum_fine / sum_coarse;
    c.add(ratio < 2.0 && std::isfinite(worst_seed),
          "H=" + fmt("%.1f", h) + " mean sup ratio 256/64 " + fmt("%.3f", ratio) + " (worst seed " +
              fmt("%.3f", worst_seed) + ")");
  }
}

struct Suite {
  int id;
  const char* name;
  const char* title;
  std::function<void(Checks&)> run;
};

const std::vector<Suite>& suites() {
  static const std::vector<Suite> all{
      {1, "fbm", "fBm round trip", fbm_round_trip},
      {2, "exponents", "exponent identity and integrability boundary", exponent_identity},
      {3, "simulation", "simulation consistency", simulation_consistency},
      {4, "kriging", "kriging oracles", kriging_oracles},
      {5, "dims", "dimension formula equivalence", dimension_tables},
      {6, "smoothness", "smoothness thresholds", smoothness_thresholds},
      {7, "derivative", "derivative consistency", derivative_consistency},
      {8, "modulus", "modulus surrogate", modulus_surrogate},
  };
  return all;
}

}  // namespace

const std::vector<std::string>& acceptance_suites() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& s : suites()) v.push_back(s.name);
    return v;
  }();
  return names;
}

std::vector<CriterionResult> run_acceptance(const std::string& suite) {
  bool known = suite == "all";
  for (const auto& s : suites()) known = known || suite == s.name;
  if (!known) throw ValidationError("unknown verification suite '" + suite + "'");
  std::vector<CriterionResult> out;
  for (const auto& s : suites()) {
    if (suite != "all" && suite != s.name) continue;
    CriterionResult r;
    r.id = s.id;
    r.name = s.title;
    const auto t0 = Clock::now();
    Checks checks;
    try {
      s.run(checks);
      r.passed = checks.ok;
      r.detail = checks.notes.str();
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = checks.notes.str() + (checks.notes.tellp() > 0 ? "; " : "") + "error: " + e.what();
    }
    r.seconds = seconds_since(t0);
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << " " << r.name << ": " << r.detail << " ("
     << fmt("%.1f", r.seconds) << " s)";
  return os.str();
}

}  // namespace anisofield
