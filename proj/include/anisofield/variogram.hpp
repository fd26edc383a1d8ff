#pragma once

#include <map>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "anisofield/quadrature.hpp"
#include "anisofield/spectral_models.hpp"

namespace anisofield {

struct VariogramValue {
  double value = 0.0;
  double err = 0.0;
};

/// v(h) = 2 * integral of (1 - cos<h, l>) f(l) dl. Throws NumericalError when
/// the error estimate exceeds rel_tol * value.
VariogramValue variogram_numeric(const SpectralModel& model, std::span<const double> h,
                                 const QuadratureSpec& quad);

/// Sampled variogram with quadrature metadata.
struct VariogramTable {
  std::vector<std::vector<double>> lags;
  std::vector<double> values;
  std::vector<double> err;
  std::string model_id;
  // Only filled by the empirical estimator.
  std::vector<std::size_t> pair_counts;
  bool sparse_warning = false;
};

VariogramTable variogram_table(const SpectralModel& model, const std::vector<std::vector<double>>& lags,
                               const QuadratureSpec& quad);

/// Short stable identifier derived from the model's JSON form.
std::string model_id(const SpectralModel& model);

/// Memoizes v(h) per distinct |h| (v depends on |h_j| only for every family).
class VariogramCache {
 public:
  VariogramCache(const SpectralModel& model, QuadratureSpec quad);

  double operator()(std::span<const double> h);
  const SpectralModel& model() const { return model_; }
  const QuadratureSpec& quad() const { return quad_; }
  std::size_t size() const;

 private:
  const SpectralModel& model_;
  QuadratureSpec quad_;
  mutable std::mutex mutex_;
  std::map<std::vector<double>, double> values_;
};

/// Covariance of the pinned field, (v(s) + v(t) - v(s - t)) / 2.
double covariance_increment(const SpectralModel& model, std::span<const double> s,
                            std::span<const double> t, const QuadratureSpec& quad);
double covariance_increment(VariogramCache& cache, std::span<const double> s, std::span<const double> t);

/// r^(2H) for H < 1, r^2 |ln r| for H = 1, r^2 for H > 1; zero at r = 0.
double sigma_scale(double hj, double r);

/// Both members equal sum_j sigma_j(|h_j|); the variogram is bounded above and
/// below by unknown multiples of this shape.
struct EnvelopeShape {
  double lower = 0.0;
  double upper = 0.0;
};
EnvelopeShape variogram_envelope(const SmoothnessExponents& exps, std::span<const double> h);

/// sqrt(phi log(1 + 1/phi)) with phi = sum_j sigma_j(|eps_j|).
double modulus_envelope(const SmoothnessExponents& exps, std::span<const double> eps);

/// Integral of f over the cube [-R, R]^N without tail extrapolation.
double partial_spectral_mass(const SpectralModel& model, double radius);

}  // namespace anisofield
