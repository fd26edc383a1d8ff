#include "anisofield/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "anisofield/error.hpp"
#include "anisofield/parallel.hpp"

namespace anisofield {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxDims = 8;
constexpr int kLowerOctaves = 34;
constexpr int kUpperOctaves = 40;

double legendre(int k, double u) {
  if (k == 0) return 1.0;
  double p0 = 1.0, p1 = u;
  for (int n = 1; n < k; ++n) {
    const double p2 = ((2.0 * n + 1.0) * u * p1 - n * p0) / (n + 1.0);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

GaussRule compute_gauss_legendre(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 1; k < n; ++k) {
        const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 1; k < n; ++k) {
      const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

// Integrals of P_k(u) cos(w u) and P_k(u) sin(w u) over [-1, 1], k < n.
void legendre_fourier_moments(int n, double w, std::vector<double>& mc, std::vector<double>& ms) {
  mc.assign(n, 0.0);
  ms.assign(n, 0.0);
  if (w > 2.0 * n) {
    for (int k = 0; k < n; ++k) {
      const double j = 2.0 * spherical_bessel_large(k, w);
      const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
      if (k % 2 == 0)
        mc[k] = sign * j;
      else
        ms[k] = sign * j;
    }
    return;
  }
  const GaussRule& dense = gauss_legendre(64);
  for (std::size_t i = 0; i < dense.nodes.size(); ++i) {
    const double u = dense.nodes[i];
    const double cw = std::cos(w * u) * dense.weights[i];
    const double sw = std::sin(w * u) * dense.weights[i];
    for (int k = 0; k < n; ++k) {
      const double p = legendre(k, u);
      mc[k] += p * cw;
      ms[k] += p * sw;
    }
  }
}

struct AxisRule {
  std::vector<double> x;
  std::vector<double> phi;
  std::vector<double> w;
  std::vector<double> c;
  std::vector<double> logc;
  std::vector<unsigned char> log_ok;
  std::vector<unsigned char> last;
};

std::vector<double> axis_breakpoints(double lag, double wref, int panels,
                                     const std::optional<double>& truncation) {
  const double half = lag > 0.0 ? kPi / lag : wref;
  const int lower = kLowerOctaves + std::max(0, static_cast<int>(std::ceil(std::log2(half))));
  std::vector<double> bp;
  for (int k = lower; k >= 0; --k) bp.push_back(std::ldexp(half, -k));
  double band_end = half;
  if (lag > 0.0) {
    for (int i = 1; i <= panels; ++i) bp.push_back(half * (1.0 + i));
    band_end = half * (1.0 + panels);
  }
  const double top = truncation ? *truncation : std::ldexp(band_end, kUpperOctaves);
  if (top <= band_end) {
    while (!bp.empty() && bp.back() >= top) bp.pop_back();
    bp.push_back(top);
    return bp;
  }
  std::vector<double> upper;
  for (double b = top; b > 1.5 * band_end; b *= 0.5) upper.push_back(b);
  if (upper.empty()) upper.push_back(top);
  bp.insert(bp.end(), upper.rbegin(), upper.rend());
  return bp;
}

AxisRule build_axis(const SpectralModel& model, int axis, double lag, double wref, int moment,
                    int order, const QuadratureSpec& quad) {
  const std::vector<double> bp = axis_breakpoints(lag, wref, quad.panels, quad.truncation);
  const double band_end = lag > 0.0 ? (kPi / lag) * (1.0 + quad.panels) : wref;
  const GaussRule& g = gauss_legendre(order);

  AxisRule rule;
  const std::size_t n = (bp.size() - 1) * g.nodes.size();
  rule.phi.reserve(n);
  rule.w.reserve(n);
  rule.c.reserve(n);
  rule.logc.reserve(n);
  rule.log_ok.reserve(n);
  rule.last.reserve(n);

  std::vector<double> mc, ms;
  for (std::size_t p = 0; p + 1 < bp.size(); ++p) {
    const double a = bp[p], b = bp[p + 1];
    const double mid = 0.5 * (a + b), rad = 0.5 * (b - a);
    const bool filon = lag > 0.0 && a >= band_end * (1.0 - 1e-12);
    const bool is_last = p + 2 == bp.size();
    double cos_mid = 0.0, sin_mid = 0.0;
    if (filon) {
      legendre_fourier_moments(order, lag * rad, mc, ms);
      cos_mid = std::cos(lag * mid);
      sin_mid = std::sin(lag * mid);
    }
    for (int i = 0; i < order; ++i) {
      const double u = g.nodes[i];
      const double x = mid + rad * u;
      const double mom = moment == 0 ? 1.0 : std::pow(x, moment);
      const double w = rad * g.weights[i] * mom;
      double c, logc;
      bool ok;
      if (lag == 0.0) {
        c = w;
        logc = 0.0;
        ok = true;
      } else if (!filon) {
        const double s = std::sin(0.5 * lag * x);
        const double one_minus = 2.0 * s * s;
        c = w * std::cos(lag * x);
        ok = one_minus < 1.0;
        logc = ok ? std::log1p(-one_minus) : 0.0;
      } else {
        double acc = 0.0;
        for (int k = 0; k < order; ++k)
          acc += 0.5 * (2.0 * k + 1.0) * legendre(k, u) * (cos_mid * mc[k] - sin_mid * ms[k]);
        c = rad * g.weights[i] * mom * acc;
        const double ratio = c / w;
        ok = ratio > 0.0;
        logc = ok ? std::log(ratio) : 0.0;
      }
      rule.x.push_back(x);
      rule.phi.push_back(model.axis_term(axis, x));
      rule.w.push_back(w);
      rule.c.push_back(c);
      rule.logc.push_back(logc);
      rule.log_ok.push_back(ok ? 1 : 0);
      rule.last.push_back(is_last ? 1 : 0);
    }
  }
  return rule;
}

struct Accumulator {
  double sum = 0.0;
  double abs_sum = 0.0;
  std::array<double, kMaxDims> shell{};
};

struct PassResult {
  Accumulator acc;
  std::size_t nodes = 0;
};

// Running products along one path of the tensor recursion.
struct NodeState {
  double phi = 0.0;   // sum of axis terms
  double w = 1.0;     // product of plain weights
  double c = 1.0;     // product of cosine weights
  double logc = 0.0;  // sum of log(c/w)
  bool ok = true;     // logc is usable
  unsigned last = 0;  // axes whose coordinate sits in the outermost panel
  double hx2 = 0.0;   // sum of lag_j^2 x_j^2
  double x2 = 0.0;    // sum of x_j^2
};

// For the Fbm pole the quadratic germ <h,l>^2/2 * exp(-|l|^2/R^2) is removed
// from 1 - cos and its integral added back in closed form.
struct OriginSubtraction {
  bool active = false;
  double inv_r2 = 0.0;
  std::vector<double> lag2;
};

class TensorSum {
 public:
  TensorSum(const SpectralModel& model, Kernel kernel, const std::vector<AxisRule>& axes,
            const OriginSubtraction& sub)
      : model_(model), kernel_(kernel), axes_(axes), sub_(sub), dims_(static_cast<int>(axes.size())) {}

  NodeState extend(const NodeState& s, int axis, std::size_t i) const {
    const AxisRule& r = axes_[axis];
    NodeState t;
    t.phi = s.phi + r.phi[i];
    t.w = s.w * r.w[i];
    t.c = s.c * r.c[i];
    t.logc = s.logc + r.logc[i];
    t.ok = s.ok && r.log_ok[i];
    t.last = s.last | (static_cast<unsigned>(r.last[i]) << axis);
    if (sub_.active) {
      const double x2 = r.x[i] * r.x[i];
      t.hx2 = s.hx2 + sub_.lag2[axis] * x2;
      t.x2 = s.x2 + x2;
    }
    return t;
  }

  void leaf(const NodeState& s, Accumulator& acc) const {
    const double f = model_.density_from_terms(s.phi);
    double contrib;
    if (kernel_ == Kernel::Cos) {
      contrib = f * s.c;
    } else {
      double bracket = s.ok ? -s.w * std::expm1(s.logc) : s.w - s.c;
      if (sub_.active) bracket -= s.w * 0.5 * s.hx2 * std::exp(-s.x2 * sub_.inv_r2);
      contrib = f * bracket;
    }
    acc.sum += contrib;
    acc.abs_sum += std::abs(contrib);
    if (s.last) {
      for (int k = 0; k < dims_; ++k)
        if (s.last & (1u << k)) acc.shell[k] += contrib;
    }
  }

  void visit(int axis, const NodeState& s, Accumulator& acc) const {
    const std::size_t n = axes_[axis].w.size();
    if (axis + 1 == dims_) {
      for (std::size_t i = 0; i < n; ++i) leaf(extend(s, axis, i), acc);
      return;
    }
    for (std::size_t i = 0; i < n; ++i) visit(axis + 1, extend(s, axis, i), acc);
  }

  PassResult run() const {
    const std::size_t n0 = axes_[0].w.size();
    std::vector<Accumulator> partial(n0);
    auto body = [&](std::size_t i) {
      const NodeState s = extend(NodeState{}, 0, i);
      if (dims_ == 1)
        leaf(s, partial[i]);
      else
        visit(1, s, partial[i]);
    };
    parallel_for(n0, body, dims_ == 1 ? n0 : 8);

    PassResult out;
    for (const auto& p : partial) {
      out.acc.sum += p.sum;
      out.acc.abs_sum += p.abs_sum;
      for (int k = 0; k < dims_; ++k) out.acc.shell[k] += p.shell[k];
    }
    out.nodes = 1;
    for (const auto& a : axes_) out.nodes *= a.w.size();
    return out;
  }

 private:
  const SpectralModel& model_;
  Kernel kernel_;
  const std::vector<AxisRule>& axes_;
  const OriginSubtraction& sub_;
  int dims_;
};

}  // namespace

void QuadratureSpec::validate() const {
  if (truncation && !(*truncation >= 1.0 && std::isfinite(*truncation)))
    throw ValidationError("quadrature truncation must be >= 1");
  if (panels < 8) throw ValidationError("quadrature panels must be >= 8");
  if (!(rel_tol > 0.0 && rel_tol < 0.1)) throw ValidationError("quadrature rel_tol must lie in (0, 0.1)");
  if (tail_order != 0 && tail_order != 1) throw ValidationError("quadrature tail_order must be 0 or 1");
  if (order < 4 || order > 32) throw ValidationError("quadrature order must lie in [4, 32]");
}

QuadratureSpec QuadratureSpec::defaults(int dims) {
  QuadratureSpec q;
  if (dims >= 3) {
    q.panels = 8;
    q.order = 6;
  }
  return q;
}

nlohmann::json quadrature_to_json(const QuadratureSpec& quad) {
  nlohmann::json j;
  j["truncation"] = quad.truncation ? nlohmann::json(*quad.truncation) : nlohmann::json(nullptr);
  j["panels"] = quad.panels;
  j["tail_order"] = quad.tail_order;
  j["rel_tol"] = quad.rel_tol;
  j["order"] = quad.order;
  return j;
}

QuadratureSpec quadrature_from_json(const nlohmann::json& doc, int dims) {
  QuadratureSpec q = QuadratureSpec::defaults(dims);
  if (!doc.is_object()) throw ValidationError("quadrature settings must be a JSON object");
  for (const auto& item : doc.items()) {
    const auto& key = item.key();
    const auto& v = item.value();
    if (key == "truncation") {
      if (!v.is_null()) q.truncation = v.get<double>();
    } else if (key == "panels") {
      q.panels = v.get<int>();
    } else if (key == "tail_order") {
      q.tail_order = v.get<int>();
    } else if (key == "rel_tol") {
      q.rel_tol = v.get<double>();
    } else if (key == "order") {
      q.order = v.get<int>();
    } else {
      throw ValidationError("unknown quadrature field '" + key + "'");
    }
  }
  q.validate();
  return q;
}

const GaussRule& gauss_legendre(int order) {
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_gauss_legendre(order)).first;
  return it->second;
}

double spherical_bessel_large(int n, double x) {
  const double s = std::sin(x), c = std::cos(x);
  double j0 = s / x;
  if (n == 0) return j0;
  double j1 = s / (x * x) - c / x;
  for (int k = 1; k < n; ++k) {
    const double j2 = (2.0 * k + 1.0) / x * j1 - j0;
    j0 = j1;
    j1 = j2;
  }
  return j1;
}

QuadratureResult integrate_spectral(const SpectralModel& model, const SpectralIntegrand& integrand,
                                    const QuadratureSpec& quad) {
  quad.validate();
  const int dims = model.dims();
  if (dims > kMaxDims) throw ValidationError("quadrature supports at most 8 dimensions");
  if (static_cast<int>(integrand.lag.size()) != dims)
    throw ValidationError("integrand lag dimension does not match the model");
  std::vector<int> moment = integrand.moment;
  if (moment.empty()) moment.assign(dims, 0);
  if (static_cast<int>(moment.size()) != dims) throw ValidationError("moment dimension mismatch");
  for (int m : moment)
    if (m < 0 || m % 2 != 0) throw ValidationError("moments must be even and non-negative");

  std::vector<double> lag(dims);
  double max_lag = 0.0;
  for (int j = 0; j < dims; ++j) {
    if (!std::isfinite(integrand.lag[j])) throw ValidationError("lag must be finite");
    lag[j] = std::abs(integrand.lag[j]);
    max_lag = std::max(max_lag, lag[j]);
  }
  if (integrand.kernel == Kernel::OneMinusCos && max_lag == 0.0) return {};
  const double wref = max_lag > 0.0 ? kPi / max_lag : 1.0;

  // Shell-to-shell decay ratio of the far field along each axis.
  std::array<double, kMaxDims> ratio{};
  bool have_ratio = false;
  if (legitimacy_check(model).legitimate) {
    const SmoothnessExponents ex = smoothness_exponents(model);
    double weight = 0.0;
    for (int i = 0; i < dims; ++i) weight += moment[i] / (2.0 * ex.h[i]);
    for (int k = 0; k < dims; ++k) {
      const double decay = 2.0 * ex.h[k] * (1.0 - weight);
      if (!(decay > 0.0)) {
        std::ostringstream os;
        os << "spectral integral diverges: far-field decay exponent " << decay << " along axis " << k;
        throw NumericalError(os.str());
      }
      ratio[k] = std::exp2(-decay);
    }
    have_ratio = true;
  } else if (quad.tail_order == 1) {
    throw ValidationError("tail extrapolation requires a legitimate spectral density");
  }

  OriginSubtraction sub;
  double germ = 0.0;
  if (model.kind() == ModelKind::Fbm && integrand.kernel == Kernel::OneMinusCos) {
    const double r = 1.0 / max_lag;
    const double h = model.hurst();
    double lag2 = 0.0;
    sub.active = true;
    sub.inv_r2 = 1.0 / (r * r);
    for (double l : lag) {
      sub.lag2.push_back(l * l);
      lag2 += l * l;
    }
    const double sphere = 2.0 * std::pow(kPi, 0.5 * dims) / std::tgamma(0.5 * dims);
    germ = model.fbm_const() * lag2 / (2.0 * dims) * sphere * 0.5 * std::pow(r, 2.0 - 2.0 * h) *
           std::tgamma(1.0 - h);
  }

  auto pass = [&](int order) {
    std::vector<AxisRule> axes;
    axes.reserve(dims);
    for (int j = 0; j < dims; ++j) axes.push_back(build_axis(model, j, lag[j], wref, moment[j], order, quad));
    return TensorSum(model, integrand.kernel, axes, sub).run();
  };

  const PassResult fine = pass(quad.order);
  const PassResult coarse = pass(quad.order - 2);

  double tail = 0.0;
  if (have_ratio) {
    for (int k = 0; k < dims; ++k) tail += fine.acc.shell[k] * ratio[k] / (1.0 - ratio[k]);
  }
  const double fold = std::ldexp(1.0, dims);
  QuadratureResult out;
  out.nodes = fine.nodes;
  const double tail_used = quad.tail_order == 1 ? tail : 0.0;
  const double tail_err = quad.tail_order == 1 ? 0.25 * std::abs(tail) : std::abs(tail);
  out.value = fold * (fine.acc.sum + tail_used) + germ;
  out.tail = fold * tail_used;
  out.err = fold * (std::abs(fine.acc.sum - coarse.acc.sum) + tail_err +
                    64.0 * std::numeric_limits<double>::epsilon() * fine.acc.abs_sum);
  return out;
}

}  // namespace anisofield
