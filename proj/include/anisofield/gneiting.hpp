#pragma once

#include <span>

#include "json.hpp"

namespace anisofield {

/// Stationary space-time covariance on R^d x R:
///
///   C(x, t) = sigma2 / psi(t)^(beta d / 2) * exp(-c |x|^(2 gamma) / psi(t)^(beta gamma)),
///   psi(t)  = 1 + a |t|^(2 alpha).
struct GneitingModel {
  int d = 1;
  double sigma2 = 1.0;
  double a = 1.0;
  double c = 1.0;
  double alpha = 0.5;
  double beta = 1.0;
  double gamma = 0.5;

  void validate() const;
};

double gneiting_covariance(const GneitingModel& gm, std::span<const double> x, double t);

/// E[(Y(x,t) - Y(y,s))^2] = 2 C(0,0) - 2 C(x - y, t - s).
double gneiting_increment_variance(const GneitingModel& gm, std::span<const double> x, double t,
                                   std::span<const double> y, double s);

nlohmann::json gneiting_to_json(const GneitingModel& gm);
GneitingModel gneiting_from_json(const nlohmann::json& doc);

}  // namespace anisofield
