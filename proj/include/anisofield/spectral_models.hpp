#pragma once

#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace anisofield {

struct QuadratureSpec;

enum class ModelKind { CanonicalC, Fbm, Stein };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

/// Per-direction smoothness indices of a model with an algebraic spectral tail.
struct SmoothnessExponents {
  std::vector<double> h;      // H_j
  double q = 0.0;             // sum of 1/H_j
  std::vector<double> h_bar;  // min(1, H_j), in axis order (not sorted)

  int dims() const { return static_cast<int>(h.size()); }
};

SmoothnessExponents make_exponents(std::vector<double> h);

struct Legitimacy {
  bool legitimate = false;
  std::string reason;  // names the violated inequality when illegitimate
};

/// Spectral density of a centered Gaussian field with stationary increments.
///
/// Every family is written in the additive-power form
///
///     f(lambda) = prefactor * (offset + sum_j phi_j(|lambda_j|))^(-power)
///
/// which the quadrature and synthesis kernels exploit:
///   CanonicalC: c0 / (1 + sum |l_j|^beta_j)^gamma
///   Fbm:        c(H,N) / |l|^(2H+N)                   (phi_j = l_j^2, offset 0)
///   Stein:      (sum c_j (a_j + l_j^2)^alpha_j)^(-nu)  (offset 0)
class SpectralModel {
 public:
  static SpectralModel canonical(std::vector<double> beta, double gamma, double scale = 1.0);
  /// Fbm with the normalizing constant computed so that v(e_1) = 1.
  static SpectralModel fbm(double hurst, int dims);
  static SpectralModel fbm(double hurst, int dims, double constant);
  static SpectralModel stein(double nu, std::vector<double> c, std::vector<double> a,
                             std::vector<double> alpha);

  ModelKind kind() const { return kind_; }
  int dims() const { return dims_; }

  const std::vector<double>& beta() const { return beta_; }
  double gamma() const { return gamma_; }
  double scale() const { return scale_; }
  double hurst() const { return hurst_; }
  double fbm_const() const { return fbm_const_; }
  double nu() const { return nu_; }
  const std::vector<double>& stein_c() const { return stein_c_; }
  const std::vector<double>& stein_a() const { return stein_a_; }
  const std::vector<double>& stein_alpha() const { return stein_alpha_; }

  double prefactor() const;
  double offset() const;
  double power() const;
  double axis_term(int axis, double abs_freq) const;
  double density_from_terms(double sum_of_terms) const;

  /// True for Stein models whose alpha_j are not all integers; such models are
  /// accepted but reported.
  bool has_noninteger_alpha() const;

 private:
  SpectralModel() = default;

  ModelKind kind_ = ModelKind::CanonicalC;
  int dims_ = 0;
  std::vector<double> beta_;
  double gamma_ = 0.0;
  double scale_ = 1.0;
  double hurst_ = 0.0;
  double fbm_const_ = 0.0;
  double nu_ = 0.0;
  std::vector<double> stein_c_;
  std::vector<double> stein_a_;
  std::vector<double> stein_alpha_;
};

Legitimacy legitimacy_check(const SpectralModel& model);

/// Throws ValidationError for an illegitimate model.
SmoothnessExponents smoothness_exponents(const SpectralModel& model);

/// Throws ValidationError at the Fbm pole lambda = 0 and on non-finite input.
double evaluate_density(const SpectralModel& model, std::span<const double> freq);

/// Constants with c_low * s^-gamma <= f <= c_high * s^-gamma, s = sum |l_j|^beta_j,
/// for every |lambda| >= 1 (CanonicalC only).
struct DensityEnvelope {
  double low = 0.0;
  double high = 0.0;
};
DensityEnvelope condition_c_envelope(const SpectralModel& model);

/// c(H, N) such that the variogram of c(H,N)/|l|^(2H+N) equals 1 at e_1.
double normalize_fbm_constant(double hurst, int dims, const QuadratureSpec& quad);

nlohmann::json model_to_json(const SpectralModel& model);
/// Rejects unknown keys and missing required fields with ValidationError.
SpectralModel model_from_json(const nlohmann::json& doc);

}  // namespace anisofield
