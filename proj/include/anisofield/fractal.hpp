#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "anisofield/gneiting.hpp"
#include "anisofield/simulation.hpp"
#include "anisofield/spectral_models.hpp"

namespace anisofield {

/// min(1, H_j), sorted ascending.
std::vector<double> clamp_exponents(const SmoothnessExponents& exps);

double range_dimension(std::span<const double> h_bar, int p);

struct GraphDimension {
  double value = 0.0;
  int argmin_k = 0;  // 0 is the sum-of-reciprocals branch
};
GraphDimension graph_dimension(std::span<const double> h_bar, int p);

enum class LevelStatus { Value, Empty, Undetermined };
std::string to_string(LevelStatus status);

/// Level sets hold "with positive probability", not almost surely.
struct LevelSetDimension {
  LevelStatus status = LevelStatus::Empty;
  double value = 0.0;
  int argmin_k = 0;
};
LevelSetDimension level_set_dimension(std::span<const double> h_bar, int p);

struct DimensionReport {
  std::vector<double> h_bar_sorted;
  int p = 1;
  double range_dim = 0.0;
  GraphDimension graph;
  LevelSetDimension level;
  // Gneiting path only: the closed-form tables, when applicable.
  std::optional<double> piecewise_range;
  std::optional<double> piecewise_graph;
  std::optional<LevelSetDimension> piecewise_level;
  std::string provenance = "generic";
};

DimensionReport dimension_report(const SmoothnessExponents& exps, int p);

/// Closed forms for the Gneiting model (alpha: time index, gamma: space
/// index). Graph tables need alpha, gamma < 1; the level table allows 1.
double gneiting_range_closed_form(int d, double alpha, double gamma, int p);
double gneiting_graph_closed_form(int d, double alpha, double gamma, int p);
LevelSetDimension gneiting_level_closed_form(int d, double alpha, double gamma, int p);

/// Evaluates both paths and throws NumericalError if they disagree beyond 1e-12.
/// alpha or gamma equal to 1 uses the generic path only.
DimensionReport gneiting_dimensions(const GneitingModel& gm, int p);

struct HurstEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  bool saturated = false;  // >= 0.9: the variogram is in its r^2 regime
  std::size_t lags = 0;
};

/// Slope / 2 of log empirical variogram against log lag, lags 1 .. (shape - 1) / 8.
HurstEstimate estimate_hurst(std::span<const FieldSample> samples, int axis);
HurstEstimate estimate_hurst(const FieldSample& sample, int axis);

}  // namespace anisofield
