#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "anisofield/quadrature.hpp"
#include "anisofield/spectral_models.hpp"
#include "anisofield/variogram.hpp"

namespace anisofield {

struct Observations {
  std::vector<std::vector<double>> sites;
  std::vector<double> values;
};

struct KrigingResult {
  std::vector<double> site;
  double prediction = 0.0;
  double variance = 0.0;
  std::vector<double> weights;  // one per retained observation site
  double jitter = 0.0;          // diagonal shift that made the system factorizable
};

/// Simple kriging of the pinned field (X(0) = 0 is always known). The
/// covariance matrix is assembled and factorized once; predictions reuse it.
class SimpleKriging {
 public:
  SimpleKriging(const SpectralModel& model, Observations obs, QuadratureSpec quad);

  KrigingResult predict(std::span<const double> u);

  /// Sites after merging coordinates that agree to 1e-12 and dropping the origin.
  const std::vector<std::vector<double>>& sites() const { return sites_; }
  double jitter() const { return jitter_; }

 private:
  std::vector<std::vector<double>> sites_;
  Eigen::VectorXd values_;
  VariogramCache cache_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  double jitter_ = 0.0;
  double max_diag_ = 0.0;
};

KrigingResult krige(const SpectralModel& model, const Observations& obs, std::span<const double> u,
                    const QuadratureSpec& quad);

/// Shapes bounding the kriging variance up to unknown constants: the minimum
/// over the sites (origin included) of sum_j |u_j - t_j|^(2H_j) and of
/// sum_j sigma_j(|u_j - t_j|).
std::pair<double, double> prediction_error_envelope(const SmoothnessExponents& exps,
                                                    const std::vector<std::vector<double>>& sites,
                                                    std::span<const double> u);

/// Log-log slope of Var(X(r e_axis) | X(0)) against r; expected 2 H_axis.
/// Axis is zero-based and must have H < 1.
double scaling_exponent_check(const SpectralModel& model, int axis, std::span<const double> radii,
                              const QuadratureSpec& quad);

}  // namespace anisofield
