#include "anisofield/fractal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "anisofield/error.hpp"

namespace anisofield {
namespace {

constexpr double kTie = 1e-12;

void check_input(std::span<const double> h_bar, int p) {
  if (h_bar.empty()) throw ValidationError("need at least one exponent");
  if (p < 1) throw ValidationError("codomain dimension p must be >= 1");
  for (std::size_t i = 0; i < h_bar.size(); ++i) {
    if (!(h_bar[i] > 0.0 && h_bar[i] <= 1.0)) throw ValidationError("clamped exponents must lie in (0, 1]");
    if (i && h_bar[i] < h_bar[i - 1]) throw ValidationError("clamped exponents must be sorted ascending");
  }
}

double reciprocal_sum(std::span<const double> h_bar) {
  double s = 0.0;
  for (double h : h_bar) s += 1.0 / h;
  return s;
}

// sum_{j<=k} H_k / H_j + N - k, k one-based.
double staircase(std::span<const double> h_bar, int k) {
  double s = 0.0;
  for (int j = 0; j < k; ++j) s += h_bar[k - 1] / h_bar[j];
  return s + static_cast<double>(h_bar.size()) - k;
}

bool agree(double a, double b) { return std::abs(a - b) <= kTie * std::max(1.0, std::abs(b)); }

}  // namespace

std::vector<double> clamp_exponents(const SmoothnessExponents& exps) {
  std::vector<double> out;
  for (double h : exps.h) out.push_back(std::min(1.0, h));
  std::sort(out.begin(), out.end());
  return out;
}

double range_dimension(std::span<const double> h_bar, int p) {
  check_input(h_bar, p);
  return std::min(static_cast<double>(p), reciprocal_sum(h_bar));
}

GraphDimension graph_dimension(std::span<const double> h_bar, int p) {
  check_input(h_bar, p);
  GraphDimension best{reciprocal_sum(h_bar), 0};
  for (int k = 1; k <= static_cast<int>(h_bar.size()); ++k) {
    const double v = staircase(h_bar, k) + (1.0 - h_bar[k - 1]) * p;
    if (v < best.value - kTie * std::max(1.0, best.value)) best = {v, k};
  }
  return best;
}

std::string to_string(LevelStatus status) {
  switch (status) {
    case LevelStatus::Value: return "value";
    case LevelStatus::Empty: return "empty";
    case LevelStatus::Undetermined: return "undetermined";
  }
  return "unknown";
}

LevelSetDimension level_set_dimension(std::span<const double> h_bar, int p) {
  check_input(h_bar, p);
  const double q = reciprocal_sum(h_bar);
  if (agree(q, p)) return {LevelStatus::Undetermined, 0.0, 0};
  if (q < p) return {LevelStatus::Empty, 0.0, 0};
  LevelSetDimension best{LevelStatus::Value, 0.0, 0};
  for (int k = 1; k <= static_cast<int>(h_bar.size()); ++k) {
    const double v = staircase(h_bar, k) - h_bar[k - 1] * p;
    if (best.argmin_k == 0 || v < best.value - kTie * std::max(1.0, std::abs(best.value))) {
      best.value = v;
      best.argmin_k = k;
    }
  }
  return best;
}

DimensionReport dimension_report(const SmoothnessExponents& exps, int p) {
  DimensionReport rep;
  rep.h_bar_sorted = clamp_exponents(exps);
  rep.p = p;
  rep.range_dim = range_dimension(rep.h_bar_sorted, p);
  rep.graph = graph_dimension(rep.h_bar_sorted, p);
  rep.level = level_set_dimension(rep.h_bar_sorted, p);
  return rep;
}

double gneiting_range_closed_form(int d, double alpha, double gamma, int p) {
  return std::min(static_cast<double>(p), d / gamma + 1.0 / alpha);
}

double gneiting_graph_closed_form(int d, double alpha, double gamma, int p) {
  if (!(alpha > 0.0 && alpha < 1.0 && gamma > 0.0 && gamma < 1.0))
    throw ValidationError("graph closed form needs alpha, gamma in (0, 1)");
  const double total = 1.0 / alpha + d / gamma;
  if (p >= total) return total;
  if (alpha <= gamma) {
    if (p < 1.0 / alpha) return d + 1.0 + (1.0 - alpha) * p;
    return d + gamma / alpha + (1.0 - gamma) * p;
  }
  if (p < d / gamma) return d + 1.0 + (1.0 - gamma) * p;
  return d * alpha / gamma + 1.0 + (1.0 - alpha) * p;
}

LevelSetDimension gneiting_level_closed_form(int d, double alpha, double gamma, int p) {
  if (!(alpha > 0.0 && alpha <= 1.0 && gamma > 0.0 && gamma <= 1.0))
    throw ValidationError("level closed form needs alpha, gamma in (0, 1]");
  const double total = 1.0 / alpha + d / gamma;
  if (agree(total, p)) return {LevelStatus::Undetermined, 0.0, 0};
  if (total < p) return {LevelStatus::Empty, 0.0, 0};
  if (alpha <= gamma) {
    if (p < 1.0 / alpha) return {LevelStatus::Value, d + 1.0 - alpha * p, 1};
    return {LevelStatus::Value, d + gamma / alpha - gamma * p, 2};
  }
  if (p < d / gamma) return {LevelStatus::Value, d + 1.0 - gamma * p, 1};
  return {LevelStatus::Value, d * alpha / gamma + 1.0 - alpha * p, d + 1};
}

DimensionReport gneiting_dimensions(const GneitingModel& gm, int p) {
  gm.validate();
  std::vector<double> h(gm.d, gm.gamma);
  h.push_back(gm.alpha);
  DimensionReport rep = dimension_report(make_exponents(h), p);
  if (gm.alpha == 1.0 || gm.gamma == 1.0) {
    rep.provenance = "generic (boundary index routed away from the closed-form tables)";
    return rep;
  }
  rep.provenance = "closed-form tables cross-checked against generic minimization";
  rep.piecewise_range = gneiting_range_closed_form(gm.d, gm.alpha, gm.gamma, p);
  rep.piecewise_graph = gneiting_graph_closed_form(gm.d, gm.alpha, gm.gamma, p);
  rep.piecewise_level = gneiting_level_closed_form(gm.d, gm.alpha, gm.gamma, p);
  auto fail = [&](const char* what, double a, double b) {
    std::ostringstream os;
    os.precision(17);
    os << "internal consistency: " << what << " closed form " << a << " differs from generic " << b;
    throw NumericalError(os.str(), std::abs(a - b));
  };
  if (!agree(*rep.piecewise_range, rep.range_dim)) fail("range", *rep.piecewise_range, rep.range_dim);
  if (!agree(*rep.piecewise_graph, rep.graph.value)) fail("graph", *rep.piecewise_graph, rep.graph.value);
  if (rep.piecewise_level->status != rep.level.status ||
      (rep.level.status == LevelStatus::Value && !agree(rep.piecewise_level->value, rep.level.value)))
    fail("level set", rep.piecewise_level->value, rep.level.value);
  return rep;
}

HurstEstimate estimate_hurst(std::span<const FieldSample> samples, int axis) {
  if (samples.empty()) throw ValidationError("Hurst estimation needs a sample");
  const Grid& g = samples[0].grid;
  if (axis < 0 || axis >= g.dims()) throw ValidationError("axis out of range");
  const std::size_t max_lag = (g.shape[axis] - 1) / 8;
  if (max_lag < 2) throw ValidationError("Hurst estimation needs at least 2 lags (shape >= 17 along the axis)");
  const VariogramTable t = empirical_variogram(samples, axis, max_lag);

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < t.values.size(); ++i) {
    if (!(t.values[i] > 0.0)) throw NumericalError("degenerate field: zero increment variance");
    xs.push_back(std::log(t.lags[i][axis]));
    ys.push_back(std::log(t.values[i]));
  }
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double sxx_c = sxx - sx * sx / n;
  const double slope = (sxy - sx * sy / n) / sxx_c;
  const double intercept = (sy - slope * sx) / n;
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - intercept - slope * xs[i];
    rss += r * r;
  }
  HurstEstimate out;
  out.lags = xs.size();
  out.estimate = std::max(0.0, slope / 2.0);
  out.std_error = xs.size() > 2 ? 0.5 * std::sqrt(rss / (n - 2.0) / sxx_c) : 0.0;
  out.saturated = out.estimate >= 0.9;
  return out;
}

HurstEstimate estimate_hurst(const FieldSample& sample, int axis) {
  return estimate_hurst(std::span<const FieldSample>(&sample, 1), axis);
}

}  // namespace anisofield
