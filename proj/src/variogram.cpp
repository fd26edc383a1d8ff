#include "anisofield/variogram.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "anisofield/error.hpp"

namespace anisofield {

VariogramValue variogram_numeric(const SpectralModel& model, std::span<const double> h,
                                 const QuadratureSpec& quad) {
  if (static_cast<int>(h.size()) != model.dims())
    throw ValidationError("lag dimension does not match the model");
  bool zero = true;
  for (double x : h) {
    if (!std::isfinite(x)) throw ValidationError("lag must be finite");
    if (x != 0.0) zero = false;
  }
  if (zero) return {};
  const Legitimacy legit = legitimacy_check(model);
  if (!legit.legitimate) throw ValidationError("illegitimate spectral density: " + legit.reason);

  SpectralIntegrand integrand;
  integrand.kernel = Kernel::OneMinusCos;
  integrand.lag.assign(h.begin(), h.end());
  const QuadratureResult r = integrate_spectral(model, integrand, quad);
  VariogramValue out{std::max(0.0, 2.0 * r.value), 2.0 * r.err};
  if (!(out.err <= quad.rel_tol * out.value)) {
    std::ostringstream os;
    os << "variogram quadrature did not converge: err " << out.err << " > rel_tol * value "
       << quad.rel_tol * out.value;
    throw NumericalError(os.str(), out.value > 0 ? out.err / out.value : out.err);
  }
  return out;
}

std::string model_id(const SpectralModel& model) {
  const std::string dump = model_to_json(model).dump();
  // FNV-1a, stable across platforms unlike std::hash.
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char ch : dump) {
    hash ^= ch;
    hash *= 1099511628211ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return to_string(model.kind()) + "-" + buf;
}

VariogramTable variogram_table(const SpectralModel& model, const std::vector<std::vector<double>>& lags,
                               const QuadratureSpec& quad) {
  VariogramTable table;
  table.model_id = model_id(model);
  table.lags = lags;
  for (const auto& h : lags) {
    const VariogramValue v = variogram_numeric(model, h, quad);
    table.values.push_back(v.value);
    table.err.push_back(v.err);
  }
  return table;
}

VariogramCache::VariogramCache(const SpectralModel& model, QuadratureSpec quad)
    : model_(model), quad_(std::move(quad)) {}

double VariogramCache::operator()(std::span<const double> h) {
  std::vector<double> key(h.size());
  for (std::size_t j = 0; j < h.size(); ++j) key[j] = std::abs(h[j]);
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = values_.find(key);
    if (it != values_.end()) return it->second;
  }
  const double v = variogram_numeric(model_, key, quad_).value;
  std::lock_guard<std::mutex> lock(mutex_);
  values_.emplace(std::move(key), v);
  return v;
}

std::size_t VariogramCache::size() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return values_.size();
}

double covariance_increment(VariogramCache& cache, std::span<const double> s, std::span<const double> t) {
  if (s.size() != t.size()) throw ValidationError("covariance arguments differ in dimension");
  std::vector<double> d(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) d[j] = s[j] - t[j];
  return 0.5 * (cache(s) + cache(t) - cache(d));
}

double covariance_increment(const SpectralModel& model, std::span<const double> s,
                            std::span<const double> t, const QuadratureSpec& quad) {
  VariogramCache cache(model, quad);
  return covariance_increment(cache, s, t);
}

double sigma_scale(double hj, double r) {
  if (r < 0.0) throw ValidationError("sigma_scale requires r >= 0");
  if (r == 0.0) return 0.0;
  if (hj < 1.0) return std::pow(r, 2.0 * hj);
  if (hj == 1.0) return r * r * std::abs(std::log(r));
  return r * r;
}

EnvelopeShape variogram_envelope(const SmoothnessExponents& exps, std::span<const double> h) {
  if (static_cast<int>(h.size()) != exps.dims()) throw ValidationError("lag dimension mismatch");
  double shape = 0.0;
  for (int j = 0; j < exps.dims(); ++j) shape += sigma_scale(exps.h[j], std::abs(h[j]));
  return {shape, shape};
}

double modulus_envelope(const SmoothnessExponents& exps, std::span<const double> eps) {
  if (static_cast<int>(eps.size()) != exps.dims()) throw ValidationError("increment dimension mismatch");
  double phi = 0.0;
  for (int j = 0; j < exps.dims(); ++j) phi += sigma_scale(exps.h[j], std::abs(eps[j]));
  if (phi == 0.0) return 0.0;
  return std::sqrt(phi * std::log1p(1.0 / phi));
}

double partial_spectral_mass(const SpectralModel& model, double radius) {
  QuadratureSpec quad = QuadratureSpec::defaults(model.dims());
  quad.truncation = radius;
  quad.tail_order = 0;
  SpectralIntegrand integrand;
  integrand.kernel = Kernel::Cos;
  integrand.lag.assign(model.dims(), 0.0);
  return integrate_spectral(model, integrand, quad).value;
}

}  // namespace anisofield
