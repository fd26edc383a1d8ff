#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "anisofield/gneiting.hpp"
#include "anisofield/spectral_models.hpp"
#include "anisofield/variogram.hpp"

namespace anisofield {

inline constexpr std::size_t kDefaultGridCap = std::size_t{1} << 20;
inline constexpr std::size_t kLatticeCellCap = std::size_t{1} << 23;

struct Grid {
  std::vector<double> origin;
  std::vector<double> spacing;
  std::vector<std::size_t> shape;

  int dims() const { return static_cast<int>(shape.size()); }
  std::size_t points() const;
  /// Coordinate of the point with row-major flat index `flat`.
  std::vector<double> point(std::size_t flat) const;
  double coordinate(int axis, std::size_t i) const { return origin[axis] + spacing[axis] * static_cast<double>(i); }
  void validate(std::size_t cap = kDefaultGridCap) const;

  /// "start:stop:count[,start:stop:count...]"; count 1 collapses the axis to start.
  static Grid parse(const std::string& text);
};

struct SynthesisInfo {
  std::string method;            // "spectral" or "exact-cholesky"
  std::size_t lattice = 0;       // uniform cells per axis
  std::size_t cells = 0;         // total frequency cells across the half lattice
  int low_shells = 0;
  int high_shells = 0;
  double jitter = 0.0;           // diagonal jitter (exact sampler)
};

/// Field values on a grid. values[c * grid.points() + i] is channel c at the
/// row-major grid index i.
struct FieldSample {
  Grid grid;
  int channels = 1;
  std::vector<double> values;
  std::uint64_t seed = 0;
  SynthesisInfo synthesis;

  double at(int channel, std::size_t flat) const { return values[static_cast<std::size_t>(channel) * grid.points() + flat]; }
};

/// Spectral synthesis of the pinned field, X(0) = 0 exactly.
FieldSample sample_field(const SpectralModel& model, const Grid& grid, std::size_t lattice, std::uint64_t seed);

/// Channel `channel` of the (N, p) field generated from `seed`.
FieldSample sample_channel(const SpectralModel& model, const Grid& grid, std::size_t lattice,
                           std::uint64_t seed, int channel);

/// p independent copies; channel c equals sample_channel(..., c).
FieldSample multi_copy_field(const SpectralModel& model, const Grid& grid, std::size_t lattice, int p,
                             std::uint64_t seed);

/// Dense Cholesky sampling of the stationary Gneiting field on a (d+1)-dimensional
/// grid (last axis is time). With pin_origin the value at the zero point is
/// subtracted, giving a field with stationary increments and X(0) = 0.
FieldSample sample_stationary_exact(const GneitingModel& gm, const Grid& grid, std::uint64_t seed,
                                    bool pin_origin = false);

/// Mean squared increment along `axis` for lags 1..max_lag (grid steps), pooled
/// over every realization and channel.
VariogramTable empirical_variogram(std::span<const FieldSample> samples, int axis, std::size_t max_lag);
VariogramTable empirical_variogram(const FieldSample& sample, int axis, std::size_t max_lag);

/// Anderson-Darling statistic with estimated mean and variance, small-sample
/// corrected (A*^2). The 1% critical value is 1.035.
double anderson_darling(std::span<const double> sample);
bool passes_normality(std::span<const double> sample);

}  // namespace anisofield
