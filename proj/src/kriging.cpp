#include "anisofield/kriging.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "anisofield/error.hpp"
#include "anisofield/parallel.hpp"

namespace anisofield {
namespace {

constexpr double kSiteTol = 1e-12;

bool same_site(const std::vector<double>& a, const std::vector<double>& b) {
  for (std::size_t j = 0; j < a.size(); ++j)
    if (std::abs(a[j] - b[j]) > kSiteTol) return false;
  return true;
}

std::string format_site(const std::vector<double>& s) {
  std::ostringstream os;
  os.precision(10);
  os << '(';
  for (std::size_t j = 0; j < s.size(); ++j) os << (j ? ", " : "") << s[j];
  os << ')';
  return os.str();
}

}  // namespace

SimpleKriging::SimpleKriging(const SpectralModel& model, Observations obs, QuadratureSpec quad)
    : cache_(model, std::move(quad)) {
  if (obs.sites.empty()) throw ValidationError("kriging needs at least one observation");
  if (obs.sites.size() != obs.values.size()) throw ValidationError("observation sites and values differ in count");
  const std::vector<double> origin(model.dims(), 0.0);
  std::vector<double> vals;
  for (std::size_t i = 0; i < obs.sites.size(); ++i) {
    const auto& s = obs.sites[i];
    if (static_cast<int>(s.size()) != model.dims()) throw ValidationError("observation site has the wrong dimension");
    for (double x : s)
      if (!std::isfinite(x)) throw ValidationError("observation site must be finite");
    if (!std::isfinite(obs.values[i])) throw ValidationError("observation value must be finite");
    if (same_site(s, origin)) {
      if (obs.values[i] != 0.0) throw ValidationError("observation at the origin must be 0 (the field is pinned)");
      continue;
    }
    bool merged = false;
    for (std::size_t k = 0; k < sites_.size(); ++k) {
      if (same_site(s, sites_[k])) {
        if (obs.values[i] != vals[k])
          throw ValidationError("conflicting values at duplicate site " + format_site(s));
        merged = true;
        break;
      }
    }
    if (!merged) {
      sites_.push_back(s);
      vals.push_back(obs.values[i]);
    }
  }
  const std::size_t n = sites_.size();
  values_ = Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(n));
  if (n == 0) return;

  // Fill the variogram cache in parallel, then assemble in a fixed order.
  std::vector<std::vector<double>> lags;
  for (std::size_t a = 0; a < n; ++a) {
    lags.push_back(sites_[a]);
    for (std::size_t b = 0; b < a; ++b) {
      std::vector<double> d(model.dims());
      for (int j = 0; j < model.dims(); ++j) d[j] = sites_[a][j] - sites_[b][j];
      lags.push_back(std::move(d));
    }
  }
  parallel_for(lags.size(), [&](std::size_t i) { cache_(lags[i]); });

  Eigen::MatrixXd sigma(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b <= a; ++b) sigma(a, b) = sigma(b, a) = covariance_increment(cache_, sites_[a], sites_[b]);
  max_diag_ = sigma.diagonal().maxCoeff();

  llt_.compute(sigma);
  if (llt_.info() == Eigen::Success) return;
  double jitter = 1e-12 * max_diag_;
  for (int attempt = 0; attempt < 3; ++attempt, jitter *= 10.0) {
    Eigen::MatrixXd work = sigma;
    work.diagonal().array() += jitter;
    llt_.compute(work);
    if (llt_.info() == Eigen::Success) {
      jitter_ = jitter;
      return;
    }
  }
  // Report the closest pair of sites, the origin included.
  std::vector<std::vector<double>> all = sites_;
  all.push_back(origin);
  double best = std::numeric_limits<double>::infinity();
  std::size_t ia = 0, ib = 0;
  for (std::size_t a = 0; a < all.size(); ++a)
    for (std::size_t b = 0; b < a; ++b) {
      double d2 = 0.0;
      for (int j = 0; j < model.dims(); ++j) d2 += (all[a][j] - all[b][j]) * (all[a][j] - all[b][j]);
      if (d2 < best) {
        best = d2;
        ia = a;
        ib = b;
      }
    }
  std::ostringstream os;
  os << "kriging covariance is numerically singular; nearest sites " << format_site(all[ib]) << " and "
     << format_site(all[ia]);
  throw NumericalError(os.str(), std::sqrt(best));
}

KrigingResult SimpleKriging::predict(std::span<const double> u) {
  const int dims = cache_.model().dims();
  if (static_cast<int>(u.size()) != dims) throw ValidationError("prediction site has the wrong dimension");
  KrigingResult out;
  out.site.assign(u.begin(), u.end());
  out.jitter = jitter_;
  const double cuu = cache_(u);
  const std::size_t n = sites_.size();
  if (n == 0) {
    out.variance = cuu;
    return out;
  }
  Eigen::VectorXd c(n);
  for (std::size_t k = 0; k < n; ++k) c(k) = covariance_increment(cache_, u, sites_[k]);
  const Eigen::VectorXd w = llt_.solve(c);
  out.prediction = w.dot(values_);
  double var = cuu - c.dot(w);
  const double tol = 1e-10 * std::max(1.0, max_diag_);
  if (var < -tol) {
    std::ostringstream os;
    os << "kriging variance " << var << " is negative beyond tolerance";
    throw NumericalError(os.str(), var);
  }
  out.variance = std::max(0.0, var);
  out.weights.assign(w.data(), w.data() + n);
  return out;
}

KrigingResult krige(const SpectralModel& model, const Observations& obs, std::span<const double> u,
                    const QuadratureSpec& quad) {
  SimpleKriging k(model, obs, quad);
  return k.predict(u);
}

std::pair<double, double> prediction_error_envelope(const SmoothnessExponents& exps,
                                                    const std::vector<std::vector<double>>& sites,
                                                    std::span<const double> u) {
  const int dims = exps.dims();
  if (static_cast<int>(u.size()) != dims) throw ValidationError("prediction site has the wrong dimension");
  double lower = 0.0, upper = 0.0;
  for (int j = 0; j < dims; ++j) {
    lower += std::pow(std::abs(u[j]), 2.0 * exps.h[j]);
    upper += sigma_scale(exps.h[j], std::abs(u[j]));
  }
  for (const auto& t : sites) {
    if (static_cast<int>(t.size()) != dims) throw ValidationError("site has the wrong dimension");
    double lo = 0.0, up = 0.0;
    for (int j = 0; j < dims; ++j) {
      const double r = std::abs(u[j] - t[j]);
      lo += std::pow(r, 2.0 * exps.h[j]);
      up += sigma_scale(exps.h[j], r);
    }
    lower = std::min(lower, lo);
    upper = std::min(upper, up);
  }
  return {lower, upper};
}

double scaling_exponent_check(const SpectralModel& model, int axis, std::span<const double> radii,
                              const QuadratureSpec& quad) {
  const SmoothnessExponents ex = smoothness_exponents(model);
  if (axis < 0 || axis >= model.dims()) throw ValidationError("axis out of range");
  if (!(ex.h[axis] < 1.0)) {
    std::ostringstream os;
    os << "scaling check needs H < 1 on the probed axis; H_" << axis + 1 << " = " << ex.h[axis];
    throw ValidationError(os.str());
  }
  if (radii.size() < 2) throw ValidationError("scaling check needs at least two radii");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (double r : radii) {
    if (!(r > 0.0)) throw ValidationError("radii must be positive");
    std::vector<double> u(model.dims(), 0.0);
    u[axis] = r;
    // Conditioning on X(0) = 0 alone leaves the variance C(u, u) = v(u).
    const double var = variogram_numeric(model, u, quad).value;
    const double x = std::log(r), y = std::log(var);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(radii.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace anisofield
