#include "anisofield/smoothness.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "anisofield/error.hpp"
#include "anisofield/variogram.hpp"

namespace anisofield {
namespace {

void require_partial(const SpectralModel& model, int j) {
  if (j < 0 || j >= model.dims()) throw ValidationError("direction index out of range");
  const SmoothnessExponents ex = smoothness_exponents(model);
  if (!(ex.h[j] > 1.0)) {
    std::ostringstream os;
    os.precision(12);
    os << "no mean-square partial derivative along axis " << j + 1 << ": H_" << j + 1 << " = " << ex.h[j]
       << " is not > 1";
    throw ValidationError(os.str());
  }
}

std::vector<double> diff(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ValidationError("points differ in dimension");
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

double spectral_moment(const SpectralModel& model, int j, std::span<const double> delta, const QuadratureSpec& quad) {
  if (static_cast<int>(delta.size()) != model.dims()) throw ValidationError("lag dimension mismatch");
  SpectralIntegrand in;
  in.kernel = Kernel::Cos;
  in.lag.assign(delta.begin(), delta.end());
  in.moment.assign(model.dims(), 0);
  in.moment[j] = 2;
  const QuadratureResult r = integrate_spectral(model, in, quad);
  if (!(r.err <= quad.rel_tol * std::abs(r.value))) {
    std::ostringstream os;
    os << "derivative covariance quadrature did not converge along axis " << j + 1 << ": err " << r.err
       << ", value " << r.value;
    throw NumericalError(os.str(), r.value != 0.0 ? r.err / std::abs(r.value) : r.err);
  }
  return r.value;
}

}  // namespace

SmoothnessReport differentiability_verdicts(const SpectralModel& model) {
  SmoothnessReport rep;
  rep.exponents = smoothness_exponents(model);
  rep.ms_differentiable = true;
  for (double h : rep.exponents.h) {
    DirectionVerdict d;
    d.exists_ms_partial = h > 1.0;
    d.margin = h - 1.0;
    rep.ms_differentiable = rep.ms_differentiable && d.exists_ms_partial;
    rep.directions.push_back(d);
  }
  rep.sample_path_differentiable = rep.ms_differentiable;
  rep.noninteger_alpha = model.has_noninteger_alpha();
  return rep;
}

SmoothnessReport ms_derivative_report(const SpectralModel& model, const QuadratureSpec& quad) {
  SmoothnessReport rep = differentiability_verdicts(model);
  const std::vector<double> zero(model.dims(), 0.0);
  for (int j = 0; j < model.dims(); ++j) {
    if (!rep.directions[j].exists_ms_partial) continue;
    try {
      rep.directions[j].derivative_variance = spectral_moment(model, j, zero, quad);
    } catch (const NumericalError& e) {
      throw NumericalError(std::string("internal consistency: axis classified differentiable but ") + e.what(),
                           e.residual());
    }
  }
  return rep;
}

double derivative_covariance(const SpectralModel& model, int j, std::span<const double> delta,
                             const QuadratureSpec& quad) {
  require_partial(model, j);
  return spectral_moment(model, j, delta, quad);
}

double variogram_gradient(const SpectralModel& model, int j, std::span<const double> h, const QuadratureSpec& quad) {
  if (j < 0 || j >= model.dims() || static_cast<int>(h.size()) != model.dims())
    throw ValidationError("gradient direction or lag dimension out of range");
  if (h[j] == 0.0) return 0.0;
  const double step = 1e-4 * std::abs(h[j]);
  std::vector<double> p(h.begin(), h.end()), m(h.begin(), h.end());
  auto central = [&](double s) {
    p[j] = h[j] + s;
    m[j] = h[j] - s;
    return (variogram_numeric(model, p, quad).value - variogram_numeric(model, m, quad).value) / (2.0 * s);
  };
  const double d1 = central(step);
  const double d2 = central(2.0 * step);
  return (4.0 * d1 - d2) / 3.0;
}

double cross_covariance(const SpectralModel& model, int j, std::span<const double> t, std::span<const double> s,
                        const QuadratureSpec& quad) {
  require_partial(model, j);
  const std::vector<double> delta = diff(s, t);
  return 0.5 * (variogram_gradient(model, j, t, quad) + variogram_gradient(model, j, delta, quad));
}

Eigen::Matrix2d cross_cov_matrix(const SpectralModel& model, int j, std::span<const double> s,
                                 std::span<const double> t, const QuadratureSpec& quad) {
  require_partial(model, j);
  const std::vector<double> delta = diff(s, t);
  VariogramCache cache(model, quad);
  const double gs = variogram_gradient(model, j, s, quad);
  const double gt = variogram_gradient(model, j, t, quad);
  const double gd = variogram_gradient(model, j, delta, quad);
  Eigen::Matrix2d v;
  v(0, 0) = covariance_increment(cache, s, t);
  v(0, 1) = 0.5 * (gt + gd);
  v(1, 0) = 0.5 * (gs - gd);
  v(1, 1) = spectral_moment(model, j, delta, quad);
  return v;
}

Eigen::MatrixXd stacked_cross_covariance(const SpectralModel& model, int j,
                                         const std::vector<std::vector<double>>& sites, const QuadratureSpec& quad) {
  const std::size_t n = sites.size();
  Eigen::MatrixXd out(2 * n, 2 * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      out.block<2, 2>(2 * a, 2 * b) = cross_cov_matrix(model, j, sites[a], sites[b], quad);
  return out;
}

double cross_covariance_floor(const SpectralModel& model, int j, const std::vector<std::vector<double>>& sites,
                              const QuadratureSpec& quad) {
  const Eigen::MatrixXd m = stacked_cross_covariance(model, j, sites, quad);
  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  const double floor = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
  if (floor < -1e-8) {
    std::ostringstream os;
    os << "internal consistency: stacked cross-covariance has eigenvalue " << floor << " below -1e-8";
    throw NumericalError(os.str(), floor);
  }
  return floor;
}

}  // namespace anisofield
