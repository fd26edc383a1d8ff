#include "anisofield/spectral_models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

#include "anisofield/error.hpp"
#include "anisofield/quadrature.hpp"

namespace anisofield {
namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << "parameter " << name << " must be positive and finite, got " << v;
    throw ValidationError(os.str());
  }
}

void require_positive(const std::vector<double>& v, const char* name) {
  if (v.empty()) throw ValidationError(std::string("parameter ") + name + " is empty");
  for (double x : v) require_positive(x, name);
}

double sum_reciprocals(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += 1.0 / x;
  return s;
}

}  // namespace

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::CanonicalC: return "CanonicalC";
    case ModelKind::Fbm: return "Fbm";
    case ModelKind::Stein: return "Stein";
  }
  return "unknown";
}

ModelKind model_kind_from_string(const std::string& name) {
  if (name == "CanonicalC") return ModelKind::CanonicalC;
  if (name == "Fbm") return ModelKind::Fbm;
  if (name == "Stein") return ModelKind::Stein;
  throw ValidationError("unknown model kind '" + name + "'");
}

SmoothnessExponents make_exponents(std::vector<double> h) {
  SmoothnessExponents e;
  for (double v : h) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError("smoothness exponents must be positive");
  }
  e.h = std::move(h);
  e.q = sum_reciprocals(e.h);
  e.h_bar.reserve(e.h.size());
  for (double v : e.h) e.h_bar.push_back(std::min(1.0, v));
  return e;
}

SpectralModel SpectralModel::canonical(std::vector<double> beta, double gamma, double scale) {
  require_positive(beta, "beta");
  require_positive(gamma, "gamma");
  require_positive(scale, "scale");
  SpectralModel m;
  m.kind_ = ModelKind::CanonicalC;
  m.dims_ = static_cast<int>(beta.size());
  m.beta_ = std::move(beta);
  m.gamma_ = gamma;
  m.scale_ = scale;
  return m;
}

SpectralModel SpectralModel::fbm(double hurst, int dims) {
  return fbm(hurst, dims, normalize_fbm_constant(hurst, dims, QuadratureSpec::defaults(dims)));
}

SpectralModel SpectralModel::fbm(double hurst, int dims, double constant) {
  if (!(hurst > 0.0 && hurst < 1.0)) throw ValidationError("Fbm requires 0 < H < 1");
  if (dims < 1) throw ValidationError("Fbm requires dims >= 1");
  require_positive(constant, "fbm_const");
  SpectralModel m;
  m.kind_ = ModelKind::Fbm;
  m.dims_ = dims;
  m.hurst_ = hurst;
  m.fbm_const_ = constant;
  return m;
}

SpectralModel SpectralModel::stein(double nu, std::vector<double> c, std::vector<double> a,
                                   std::vector<double> alpha) {
  require_positive(nu, "nu");
  require_positive(c, "stein_c");
  require_positive(a, "stein_a");
  require_positive(alpha, "stein_alpha");
  if (c.size() != a.size() || c.size() != alpha.size())
    throw ValidationError("stein_c, stein_a and stein_alpha must have equal length");
  SpectralModel m;
  m.kind_ = ModelKind::Stein;
  m.dims_ = static_cast<int>(alpha.size());
  m.nu_ = nu;
  m.stein_c_ = std::move(c);
  m.stein_a_ = std::move(a);
  m.stein_alpha_ = std::move(alpha);
  return m;
}

double SpectralModel::prefactor() const {
  switch (kind_) {
    case ModelKind::CanonicalC: return scale_;
    case ModelKind::Fbm: return fbm_const_;
    case ModelKind::Stein: return 1.0;
  }
  return 0.0;
}

double SpectralModel::offset() const { return kind_ == ModelKind::CanonicalC ? 1.0 : 0.0; }

double SpectralModel::power() const {
  switch (kind_) {
    case ModelKind::CanonicalC: return gamma_;
    case ModelKind::Fbm: return hurst_ + 0.5 * dims_;
    case ModelKind::Stein: return nu_;
  }
  return 0.0;
}

double SpectralModel::axis_term(int axis, double x) const {
  x = std::abs(x);
  switch (kind_) {
    case ModelKind::CanonicalC: return std::pow(x, beta_[axis]);
    case ModelKind::Fbm: return x * x;
    case ModelKind::Stein:
      return stein_c_[axis] * std::pow(stein_a_[axis] + x * x, stein_alpha_[axis]);
  }
  return 0.0;
}

double SpectralModel::density_from_terms(double sum_of_terms) const {
  return prefactor() * std::pow(offset() + sum_of_terms, -power());
}

bool SpectralModel::has_noninteger_alpha() const {
  return std::any_of(stein_alpha_.begin(), stein_alpha_.end(),
                     [](double a) { return a != std::round(a); });
}

Legitimacy legitimacy_check(const SpectralModel& model) {
  Legitimacy out;
  std::ostringstream os;
  os.precision(17);
  switch (model.kind()) {
    case ModelKind::CanonicalC: {
      const double s = sum_reciprocals(model.beta());
      out.legitimate = model.gamma() > s;
      if (!out.legitimate)
        os << "gamma > sum_j 1/beta_j violated: gamma = " << model.gamma() << ", sum = " << s;
      break;
    }
    case ModelKind::Stein: {
      const double s = sum_reciprocals(model.stein_alpha());
      out.legitimate = s < 2.0 * model.nu();
      if (!out.legitimate)
        os << "sum_j 1/alpha_j < 2 nu violated: sum = " << s << ", 2 nu = " << 2.0 * model.nu();
      break;
    }
    case ModelKind::Fbm:
      out.legitimate = model.hurst() > 0.0 && model.hurst() < 1.0;
      if (!out.legitimate) os << "0 < H < 1 violated: H = " << model.hurst();
      break;
  }
  out.reason = os.str();
  return out;
}

SmoothnessExponents smoothness_exponents(const SpectralModel& model) {
  const Legitimacy legit = legitimacy_check(model);
  if (!legit.legitimate) throw ValidationError("illegitimate spectral density: " + legit.reason);
  std::vector<double> h(model.dims());
  switch (model.kind()) {
    case ModelKind::CanonicalC: {
      const double excess = model.gamma() - sum_reciprocals(model.beta());
      for (int j = 0; j < model.dims(); ++j) h[j] = 0.5 * model.beta()[j] * excess;
      break;
    }
    case ModelKind::Stein: {
      const double excess = model.nu() - 0.5 * sum_reciprocals(model.stein_alpha());
      for (int j = 0; j < model.dims(); ++j) h[j] = model.stein_alpha()[j] * excess;
      break;
    }
    case ModelKind::Fbm:
      std::fill(h.begin(), h.end(), model.hurst());
      break;
  }
  return make_exponents(std::move(h));
}

double evaluate_density(const SpectralModel& model, std::span<const double> freq) {
  if (static_cast<int>(freq.size()) != model.dims())
    throw ValidationError("frequency dimension does not match the model");
  double terms = 0.0;
  bool at_origin = true;
  for (int j = 0; j < model.dims(); ++j) {
    if (!std::isfinite(freq[j])) throw ValidationError("frequency must be finite");
    if (freq[j] != 0.0) at_origin = false;
    terms += model.axis_term(j, freq[j]);
  }
  if (model.kind() == ModelKind::Fbm && at_origin)
    throw ValidationError("Fbm spectral density is singular at lambda = 0");
  return model.density_from_terms(terms);
}

DensityEnvelope condition_c_envelope(const SpectralModel& model) {
  if (model.kind() != ModelKind::CanonicalC)
    throw ValidationError("density envelope is defined for CanonicalC models");
  // On |l| >= 1 some |l_j| >= 1/sqrt(N), hence s >= min_j N^(-beta_j/2).
  const double n = model.dims();
  double s_min = 1.0;
  for (double b : model.beta()) s_min = std::min(s_min, std::pow(n, -0.5 * b));
  return {model.scale() * std::pow(s_min / (1.0 + s_min), model.gamma()), model.scale()};
}

double normalize_fbm_constant(double hurst, int dims, const QuadratureSpec& quad) {
  if (dims < 1) throw ValidationError("Fbm requires dims >= 1");
  // The lag e_1 only involves l_1, so the other dims - 1 axes integrate out:
  // the integral of (l_1^2 + |m|^2)^(-(2H+N)/2) over m in R^(N-1) is
  // |l_1|^-(2H+1) * pi^((N-1)/2) * Gamma(H + 1/2) / Gamma(H + N/2).
  // What remains is the one-dimensional problem.
  const SpectralModel unit = SpectralModel::fbm(hurst, 1, 1.0);
  SpectralIntegrand integrand;
  integrand.kernel = Kernel::OneMinusCos;
  integrand.lag = {1.0};
  // A 1-D rule is cheap, so never go below the 1-D defaults.
  QuadratureSpec q1 = quad;
  q1.panels = std::max(quad.panels, QuadratureSpec::defaults(1).panels);
  q1.order = std::max(quad.order, QuadratureSpec::defaults(1).order);
  const QuadratureResult r = integrate_spectral(unit, integrand, q1);
  if (!(r.err <= quad.rel_tol * r.value))
    throw NumericalError("Fbm normalization quadrature did not converge", r.err / r.value);
  const double marginal = std::pow(std::numbers::pi, 0.5 * (dims - 1)) *
                          std::exp(std::lgamma(hurst + 0.5) - std::lgamma(hurst + 0.5 * dims));
  return 1.0 / (2.0 * r.value * marginal);
}

namespace {

std::vector<double> read_vector(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key)) throw ValidationError(std::string("model field '") + key + "' is required");
  const auto& v = doc.at(key);
  if (!v.is_array()) throw ValidationError(std::string("model field '") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ValidationError(std::string("model field '") + key + "' must be numeric");
    out.push_back(x.get<double>());
  }
  return out;
}

double read_number(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key)) throw ValidationError(std::string("model field '") + key + "' is required");
  if (!doc.at(key).is_number())
    throw ValidationError(std::string("model field '") + key + "' must be numeric");
  return doc.at(key).get<double>();
}

}  // namespace

nlohmann::json model_to_json(const SpectralModel& model) {
  nlohmann::json j;
  j["kind"] = to_string(model.kind());
  j["dims"] = model.dims();
  switch (model.kind()) {
    case ModelKind::CanonicalC:
      j["beta"] = model.beta();
      j["gamma"] = model.gamma();
      j["scale"] = model.scale();
      break;
    case ModelKind::Fbm:
      j["hurst"] = model.hurst();
      j["fbm_const"] = model.fbm_const();
      break;
    case ModelKind::Stein:
      j["nu"] = model.nu();
      j["stein_c"] = model.stein_c();
      j["stein_a"] = model.stein_a();
      j["stein_alpha"] = model.stein_alpha();
      break;
  }
  return j;
}

SpectralModel model_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ValidationError("model document must be a JSON object");
  if (!doc.contains("kind") || !doc.at("kind").is_string())
    throw ValidationError("model field 'kind' is required");
  const ModelKind kind = model_kind_from_string(doc.at("kind").get<std::string>());

  std::set<std::string> allowed{"kind", "dims"};
  switch (kind) {
    case ModelKind::CanonicalC: allowed.insert({"beta", "gamma", "scale"}); break;
    case ModelKind::Fbm: allowed.insert({"hurst", "fbm_const"}); break;
    case ModelKind::Stein: allowed.insert({"nu", "stein_c", "stein_a", "stein_alpha"}); break;
  }
  for (const auto& item : doc.items()) {
    if (!allowed.count(item.key()))
      throw ValidationError("unknown model field '" + item.key() + "' for kind " + to_string(kind));
  }

  auto check_dims = [&](const SpectralModel& m) {
    if (doc.contains("dims")) {
      if (!doc.at("dims").is_number_integer() || doc.at("dims").get<int>() != m.dims())
        throw ValidationError("model field 'dims' disagrees with the parameter vectors");
    }
    return m;
  };

  switch (kind) {
    case ModelKind::CanonicalC: {
      const double scale = doc.contains("scale") ? read_number(doc, "scale") : 1.0;
      return check_dims(SpectralModel::canonical(read_vector(doc, "beta"), read_number(doc, "gamma"), scale));
    }
    case ModelKind::Fbm: {
      if (!doc.contains("dims") || !doc.at("dims").is_number_integer())
        throw ValidationError("model field 'dims' is required for Fbm");
      const int dims = doc.at("dims").get<int>();
      const double h = read_number(doc, "hurst");
      if (doc.contains("fbm_const")) return SpectralModel::fbm(h, dims, read_number(doc, "fbm_const"));
      return SpectralModel::fbm(h, dims);
    }
    case ModelKind::Stein:
      return check_dims(SpectralModel::stein(read_number(doc, "nu"), read_vector(doc, "stein_c"),
                                             read_vector(doc, "stein_a"), read_vector(doc, "stein_alpha")));
  }
  throw ValidationError("unreachable model kind");
}

}  // namespace anisofield
