#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "anisofield/spectral_models.hpp"
#include "json.hpp"

namespace anisofield {

/// Discretization of integrals over the frequency space.
///
/// Each axis of the positive orthant is cut into three zones: geometric panels
/// from ~2^-34 up to the half period pi/|h_j| of the cosine factor, `panels`
/// uniform half-period panels, and geometric (ratio 2) panels up to the
/// truncation. Far panels use Filon weights, so the cosine never has to be
/// resolved there. Beyond the truncation an algebraic tail is extrapolated
/// from the known decay exponent (tail_order 1) or dropped (tail_order 0).
struct QuadratureSpec {
  std::optional<double> truncation;  // frequency cube half-width; automatic if empty
  int panels = 16;
  int tail_order = 1;
  double rel_tol = 1e-6;
  int order = 8;  // Gauss-Legendre nodes per panel

  void validate() const;
  static QuadratureSpec defaults(int dims);
};

nlohmann::json quadrature_to_json(const QuadratureSpec& quad);
QuadratureSpec quadrature_from_json(const nlohmann::json& doc, int dims);

enum class Kernel {
  OneMinusCos,  // 1 - cos<lag, lambda>
  Cos,          // cos<lag, lambda>
};

struct SpectralIntegrand {
  Kernel kernel = Kernel::OneMinusCos;
  std::vector<double> lag;   // per-axis frequency of the cosine factor
  std::vector<int> moment;   // per-axis even power of lambda_j; empty means none
};

struct QuadratureResult {
  double value = 0.0;
  double err = 0.0;   // discretization + tail-model + roundoff estimate
  double tail = 0.0;  // extrapolated contribution beyond the truncation
  std::size_t nodes = 0;
};

/// Integral over R^N of kernel * prod |l_j|^moment_j * f(l).
QuadratureResult integrate_spectral(const SpectralModel& model, const SpectralIntegrand& integrand,
                                    const QuadratureSpec& quad);

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1].
const GaussRule& gauss_legendre(int order);

/// Spherical Bessel function j_n(x) for x > n (upward recurrence).
double spherical_bessel_large(int n, double x);

}  // namespace anisofield
