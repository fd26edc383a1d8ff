#pragma once

#include <Eigen/Core>
#include <optional>
#include <span>
#include <vector>

#include "anisofield/quadrature.hpp"
#include "anisofield/spectral_models.hpp"

namespace anisofield {

struct DirectionVerdict {
  bool exists_ms_partial = false;          // H_j > 1, strictly
  std::optional<double> derivative_variance;  // integral of l_j^2 f, when it exists
  double margin = 0.0;                     // H_j - 1
};

struct SmoothnessReport {
  SmoothnessExponents exponents;
  std::vector<DirectionVerdict> directions;
  bool ms_differentiable = false;
  // Same inequality as the mean-square verdict under the algebraic envelope.
  bool sample_path_differentiable = false;
  bool noninteger_alpha = false;
};

/// Verdicts only, no quadrature. Stays usable arbitrarily close to H_j = 1
/// where the derivative variance integral becomes numerically intractable.
SmoothnessReport differentiability_verdicts(const SpectralModel& model);

/// Verdicts plus derivative variances. Throws NumericalError if the variance
/// of a direction classified as differentiable cannot be integrated.
SmoothnessReport ms_derivative_report(const SpectralModel& model, const QuadratureSpec& quad);

/// integral of l_j^2 cos<delta, l> f(l) dl; axis j is zero-based.
double derivative_covariance(const SpectralModel& model, int j, std::span<const double> delta,
                             const QuadratureSpec& quad);

/// dv/dh_j by central differences (step 1e-4 |h_j|, one Richardson level).
/// Exactly 0 when h_j = 0, since v is even in each coordinate.
double variogram_gradient(const SpectralModel& model, int j, std::span<const double> h,
                          const QuadratureSpec& quad);

/// Cov(X(s), X'_j(t)) = (v'_j(t) + v'_j(s - t)) / 2.
double cross_covariance(const SpectralModel& model, int j, std::span<const double> t,
                        std::span<const double> s, const QuadratureSpec& quad);

/// Joint covariance of (X(s), X'_j(s)) and (X(t), X'_j(t)).
Eigen::Matrix2d cross_cov_matrix(const SpectralModel& model, int j, std::span<const double> s,
                                 std::span<const double> t, const QuadratureSpec& quad);

/// 2n x 2n covariance of (X(s_1), X'_j(s_1), ..., X(s_n), X'_j(s_n)).
Eigen::MatrixXd stacked_cross_covariance(const SpectralModel& model, int j,
                                         const std::vector<std::vector<double>>& sites,
                                         const QuadratureSpec& quad);

/// Smallest eigenvalue of the stacked matrix; throws NumericalError below -1e-8.
double cross_covariance_floor(const SpectralModel& model, int j, const std::vector<std::vector<double>>& sites,
                              const QuadratureSpec& quad);

}  // namespace anisofield
