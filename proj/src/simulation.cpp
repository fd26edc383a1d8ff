#include "anisofield/simulation.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "anisofield/error.hpp"
#include "anisofield/parallel.hpp"
#include "anisofield/random.hpp"

namespace anisofield {
namespace {

using cplx = std::complex<double>;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t coefficient_stream(int channel) { return static_cast<std::uint64_t>(channel) * 64; }
std::uint64_t jitter_stream(int channel, int axis) {
  return static_cast<std::uint64_t>(channel) * 64 + 1 + static_cast<std::uint64_t>(axis);
}

struct AxisCells {
  std::vector<double> freq;
  std::vector<double> measure;
};

struct LatticePlan {
  int low = 24;
  int high = 24;
};

LatticePlan plan_lattice(const SpectralModel& model) {
  const SmoothnessExponents ex = smoothness_exponents(model);
  const double hmin = *std::min_element(ex.h.begin(), ex.h.end());
  LatticePlan plan;
  // Far-field octaves shrink like 2^(-2H); keep the dropped tail near 2^-32.
  plan.high = std::clamp(static_cast<int>(std::ceil(16.0 / hmin)), 24, 96);
  // Only the Fbm pole puts appreciable mass at vanishing frequency.
  if (model.kind() == ModelKind::Fbm)
    plan.low = std::clamp(static_cast<int>(std::ceil(16.0 / (1.0 - model.hurst()))), 24, 200);
  return plan;
}

// Positive-frequency cells of one axis, one jittered frequency per cell. Low
// and high shells are dyadic and sampled log-uniformly; the measure absorbs
// the sampling density so every cell is an unbiased estimate of its integral.
AxisCells positive_cells(const Grid& grid, int axis, std::size_t lattice, const LatticePlan& plan,
                         const CounterRng& rng, int channel, std::uint64_t index_base) {
  const double dx = grid.spacing[axis];
  const double extent = dx * static_cast<double>(std::max<std::size_t>(grid.shape[axis] - 1, 1));
  const double lo = kTwoPi / extent;
  const double hi = std::max(kTwoPi / dx, 2.0 * lo);
  AxisCells out;
  std::uint64_t idx = index_base;
  auto log_cell = [&](double a, double b) {
    const double u = rng.uniform2(jitter_stream(channel, axis), idx++)[0];
    const double lam = a * std::pow(b / a, u);
    out.freq.push_back(lam);
    out.measure.push_back(lam * std::log(b / a));
  };
  for (int s = plan.low - 1; s >= 0; --s) log_cell(std::ldexp(lo, -(s + 1)), std::ldexp(lo, -s));
  const double width = (hi - lo) / static_cast<double>(lattice);
  for (std::size_t i = 0; i < lattice; ++i) {
    const double u = rng.uniform2(jitter_stream(channel, axis), idx++)[0];
    out.freq.push_back(lo + (static_cast<double>(i) + u) * width);
    out.measure.push_back(width);
  }
  for (int s = 0; s < plan.high; ++s) log_cell(std::ldexp(hi, s), std::ldexp(hi, s + 1));
  return out;
}

// out[p, g, q] = sum_k e[g, k] * in[p, k, q]; each output summed in k order.
std::vector<cplx> mode_product(const std::vector<cplx>& in, std::size_t outer, std::size_t k_len,
                               std::size_t inner, const std::vector<cplx>& e, std::size_t g_len) {
  std::vector<cplx> out(outer * g_len * inner);
  parallel_for(outer * g_len, [&](std::size_t pg) {
    const std::size_t p = pg / g_len, g = pg % g_len;
    cplx* dst = &out[(p * g_len + g) * inner];
    const cplx* row = &e[g * k_len];
    for (std::size_t k = 0; k < k_len; ++k) {
      const cplx w = row[k];
      const cplx* src = &in[(p * k_len + k) * inner];
      for (std::size_t q = 0; q < inner; ++q) dst[q] += w * src[q];
    }
  }, 4);
  return out;
}

}  // namespace

std::size_t Grid::points() const {
  std::size_t n = 1;
  for (std::size_t s : shape) n *= s;
  return n;
}

std::vector<double> Grid::point(std::size_t flat) const {
  std::vector<double> t(shape.size());
  for (int j = dims() - 1; j >= 0; --j) {
    t[j] = coordinate(j, flat % shape[j]);
    flat /= shape[j];
  }
  return t;
}

void Grid::validate(std::size_t cap) const {
  if (shape.empty()) throw ValidationError("grid must have at least one axis");
  if (origin.size() != shape.size() || spacing.size() != shape.size())
    throw ValidationError("grid origin, spacing and shape differ in length");
  double total = 1.0;
  for (int j = 0; j < dims(); ++j) {
    if (shape[j] == 0) throw ValidationError("grid shape entries must be positive");
    if (!(spacing[j] > 0.0) || !std::isfinite(spacing[j])) throw ValidationError("grid spacing must be positive");
    if (!std::isfinite(origin[j])) throw ValidationError("grid origin must be finite");
    total *= static_cast<double>(shape[j]);
  }
  if (total > static_cast<double>(cap)) {
    std::ostringstream os;
    os << "grid has " << total << " points, above the cap of " << cap;
    throw ValidationError(os.str());
  }
}

Grid Grid::parse(const std::string& text) {
  Grid g;
  std::stringstream axes(text);
  std::string item;
  while (std::getline(axes, item, ',')) {
    std::stringstream parts(item);
    std::string a, b, c;
    if (!std::getline(parts, a, ':') || !std::getline(parts, b, ':') || !std::getline(parts, c) ||
        c.find(':') != std::string::npos)
      throw ValidationError("grid axis '" + item + "' is not start:stop:count");
    double start, stop;
    long long count;
    try {
      std::size_t pos;
      start = std::stod(a, &pos);
      if (pos != a.size()) throw std::invalid_argument(a);
      stop = std::stod(b, &pos);
      if (pos != b.size()) throw std::invalid_argument(b);
      count = std::stoll(c, &pos);
      if (pos != c.size()) throw std::invalid_argument(c);
    } catch (const std::logic_error&) {
      throw ValidationError("grid axis '" + item + "' has a malformed number");
    }
    if (count < 1) throw ValidationError("grid axis '" + item + "' needs count >= 1");
    if (count > 1 && !(stop > start)) throw ValidationError("grid axis '" + item + "' needs stop > start");
    g.origin.push_back(start);
    g.spacing.push_back(count > 1 ? (stop - start) / static_cast<double>(count - 1) : 1.0);
    g.shape.push_back(static_cast<std::size_t>(count));
  }
  g.validate();
  return g;
}

FieldSample sample_channel(const SpectralModel& model, const Grid& grid, std::size_t lattice,
                           std::uint64_t seed, int channel) {
  grid.validate();
  if (grid.dims() != model.dims()) throw ValidationError("grid dimension does not match the model");
  if (lattice < 16) throw ValidationError("lattice size must be >= 16");
  if (channel < 0) throw ValidationError("channel index must be non-negative");
  const Legitimacy legit = legitimacy_check(model);
  if (!legit.legitimate) throw ValidationError("illegitimate spectral density: " + legit.reason);

  const int dims = model.dims();
  const LatticePlan plan = plan_lattice(model);
  const CounterRng rng(seed);

  // Half lattice: axis 0 positive, every other axis mirrored.
  std::vector<AxisCells> cells(dims);
  double total = 1.0;
  for (int j = 0; j < dims; ++j) {
    AxisCells pos = positive_cells(grid, j, lattice, plan, rng, channel, 0);
    if (j == 0) {
      cells[j] = std::move(pos);
    } else {
      const std::uint64_t base = pos.freq.size();
      AxisCells neg = positive_cells(grid, j, lattice, plan, rng, channel, base);
      for (std::size_t i = neg.freq.size(); i-- > 0;) {
        cells[j].freq.push_back(-neg.freq[i]);
        cells[j].measure.push_back(neg.measure[i]);
      }
      cells[j].freq.insert(cells[j].freq.end(), pos.freq.begin(), pos.freq.end());
      cells[j].measure.insert(cells[j].measure.end(), pos.measure.begin(), pos.measure.end());
    }
    total *= static_cast<double>(cells[j].freq.size());
  }
  if (total > static_cast<double>(kLatticeCellCap)) {
    std::ostringstream os;
    os << "frequency lattice of " << total << " cells exceeds the cap of " << kLatticeCellCap
       << "; reduce the lattice size";
    throw ValidationError(os.str());
  }

  std::vector<std::size_t> k_len(dims);
  for (int j = 0; j < dims; ++j) k_len[j] = cells[j].freq.size();
  const std::size_t n_cells = static_cast<std::size_t>(total);

  // a_k = sqrt(2 f dl) (xi - i eta), so Re(a_k e^{i<t,l>}) = sqrt(2 f dl)(xi cos + eta sin).
  std::vector<cplx> coef(n_cells);
  parallel_for(n_cells, [&](std::size_t flat) {
    std::size_t rest = flat;
    double phi = 0.0, measure = 1.0;
    for (int j = dims - 1; j >= 0; --j) {
      const std::size_t i = rest % k_len[j];
      rest /= k_len[j];
      phi += model.axis_term(j, std::abs(cells[j].freq[i]));
      measure *= cells[j].measure[i];
    }
    const double amp = std::sqrt(2.0 * model.density_from_terms(phi) * measure);
    const auto z = rng.normal2(coefficient_stream(channel), flat);
    coef[flat] = cplx(amp * z[0], -amp * z[1]);
  }, 256);

  // Contract one axis at a time, last first. Each axis gets an extra column
  // at t = 0 so S(0) comes out of the identical arithmetic.
  std::vector<cplx> tensor = std::move(coef);
  std::size_t outer = n_cells;
  std::size_t inner = 1;
  for (int j = dims - 1; j >= 0; --j) {
    const std::size_t g_len = grid.shape[j] + 1;
    std::vector<cplx> e(g_len * k_len[j]);
    for (std::size_t g = 0; g < g_len; ++g) {
      const double t = g < grid.shape[j] ? grid.coordinate(j, g) : 0.0;
      for (std::size_t k = 0; k < k_len[j]; ++k) {
        const double ph = t * cells[j].freq[k];
        e[g * k_len[j] + k] = cplx(std::cos(ph), std::sin(ph));
      }
    }
    outer /= k_len[j];
    tensor = mode_product(tensor, outer, k_len[j], inner, e, g_len);
    inner *= g_len;
  }

  FieldSample fs;
  fs.grid = grid;
  fs.channels = 1;
  fs.seed = seed;
  fs.synthesis.method = "spectral";
  fs.synthesis.lattice = lattice;
  fs.synthesis.cells = n_cells;
  fs.synthesis.low_shells = plan.low;
  fs.synthesis.high_shells = plan.high;

  const std::size_t n = grid.points();
  std::size_t zero_index = 0;
  for (int j = 0; j < dims; ++j) zero_index = zero_index * (grid.shape[j] + 1) + grid.shape[j];
  const double s0 = tensor[zero_index].real();
  fs.values.resize(n);
  for (std::size_t flat = 0; flat < n; ++flat) {
    std::size_t rest = flat, ext = 0, stride = 1;
    for (int j = dims - 1; j >= 0; --j) {
      ext += (rest % grid.shape[j]) * stride;
      rest /= grid.shape[j];
      stride *= grid.shape[j] + 1;
    }
    fs.values[flat] = tensor[ext].real() - s0;
  }
  return fs;
}

FieldSample sample_field(const SpectralModel& model, const Grid& grid, std::size_t lattice, std::uint64_t seed) {
  return sample_channel(model, grid, lattice, seed, 0);
}

FieldSample multi_copy_field(const SpectralModel& model, const Grid& grid, std::size_t lattice, int p,
                             std::uint64_t seed) {
  if (p < 1) throw ValidationError("channel count p must be >= 1");
  FieldSample out = sample_channel(model, grid, lattice, seed, 0);
  out.channels = p;
  for (int c = 1; c < p; ++c) {
    const FieldSample ch = sample_channel(model, grid, lattice, seed, c);
    out.values.insert(out.values.end(), ch.values.begin(), ch.values.end());
  }
  return out;
}

FieldSample sample_stationary_exact(const GneitingModel& gm, const Grid& grid, std::uint64_t seed,
                                    bool pin_origin) {
  gm.validate();
  grid.validate(4096);
  if (grid.dims() != gm.d + 1) throw ValidationError("grid must have d + 1 axes (space then time)");

  const std::size_t n = grid.points();
  std::vector<std::vector<double>> pts(n);
  std::size_t zero = n;
  for (std::size_t i = 0; i < n; ++i) {
    pts[i] = grid.point(i);
    if (std::all_of(pts[i].begin(), pts[i].end(), [](double v) { return v == 0.0; })) zero = i;
  }
  const bool extra = pin_origin && zero == n;
  if (extra) pts.emplace_back(grid.dims(), 0.0);
  const std::size_t m = pts.size();

  Eigen::MatrixXd cov(m, m);
  std::vector<double> dx(gm.d);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b <= a; ++b) {
      for (int k = 0; k < gm.d; ++k) dx[k] = pts[a][k] - pts[b][k];
      const double c = gneiting_covariance(gm, dx, pts[a][gm.d] - pts[b][gm.d]);
      cov(a, b) = c;
      cov(b, a) = c;
    }
  }

  double jitter = 1e-10 * gm.sigma2;
  Eigen::LLT<Eigen::MatrixXd> llt;
  bool ok = false;
  for (int attempt = 0; attempt <= 3; ++attempt, jitter *= 10.0) {
    Eigen::MatrixXd work = cov;
    work.diagonal().array() += jitter;
    llt.compute(work);
    if (llt.info() == Eigen::Success) {
      ok = true;
      break;
    }
  }
  if (!ok) {
    const double lmin = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(cov, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
    std::ostringstream os;
    os << "covariance factorization failed after jitter escalation; smallest eigenvalue " << lmin;
    throw NumericalError(os.str(), lmin);
  }

  const CounterRng rng(seed);
  Eigen::VectorXd z(m);
  for (std::size_t i = 0; i < m; i += 2) {
    const auto pair = rng.normal2(0, i / 2);
    z(i) = pair[0];
    if (i + 1 < m) z(i + 1) = pair[1];
  }
  const Eigen::VectorXd y = llt.matrixL() * z;

  FieldSample fs;
  fs.grid = grid;
  fs.seed = seed;
  fs.synthesis.method = "exact-cholesky";
  fs.synthesis.jitter = jitter;
  fs.values.resize(n);
  const double base = pin_origin ? y(extra ? m - 1 : zero) : 0.0;
  for (std::size_t i = 0; i < n; ++i) fs.values[i] = y(i) - base;
  if (pin_origin && !extra) fs.values[zero] = 0.0;
  return fs;
}

VariogramTable empirical_variogram(std::span<const FieldSample> samples, int axis, std::size_t max_lag) {
  if (samples.empty()) throw ValidationError("empirical variogram needs at least one sample");
  const Grid& grid = samples[0].grid;
  if (axis < 0 || axis >= grid.dims()) throw ValidationError("variogram axis out of range");
  if (max_lag < 1 || max_lag >= grid.shape[axis]) throw ValidationError("max_lag must lie in [1, shape - 1]");
  for (const auto& s : samples)
    if (s.grid.shape != grid.shape) throw ValidationError("samples are on different grids");

  const std::size_t n = grid.points();
  std::size_t stride = 1;
  for (int j = grid.dims() - 1; j > axis; --j) stride *= grid.shape[j];
  const std::size_t len = grid.shape[axis];

  VariogramTable table;
  table.model_id = "empirical";
  std::size_t copies = 0;
  for (const auto& s : samples) copies += static_cast<std::size_t>(s.channels);

  for (std::size_t lag = 1; lag <= max_lag; ++lag) {
    std::vector<double> per_copy;
    std::size_t pairs = 0;
    double total = 0.0;
    for (const auto& s : samples) {
      for (int c = 0; c < s.channels; ++c) {
        const double* v = &s.values[static_cast<std::size_t>(c) * n];
        double acc = 0.0;
        std::size_t count = 0;
        for (std::size_t flat = 0; flat < n; ++flat) {
          const std::size_t pos = (flat / stride) % len;
          if (pos + lag >= len) continue;
          const double d = v[flat + lag * stride] - v[flat];
          acc += d * d;
          ++count;
        }
        per_copy.push_back(count ? acc / static_cast<double>(count) : 0.0);
        total += acc;
        pairs += count;
      }
    }
    const double mean = pairs ? total / static_cast<double>(pairs) : 0.0;
    double se = 0.0;
    if (copies > 1) {
      double m = 0.0, ss = 0.0;
      for (double x : per_copy) m += x;
      m /= static_cast<double>(per_copy.size());
      for (double x : per_copy) ss += (x - m) * (x - m);
      se = std::sqrt(ss / static_cast<double>(per_copy.size() - 1) / static_cast<double>(per_copy.size()));
    }
    std::vector<double> h(grid.dims(), 0.0);
    h[axis] = static_cast<double>(lag) * grid.spacing[axis];
    table.lags.push_back(std::move(h));
    table.values.push_back(mean);
    table.err.push_back(se);
    table.pair_counts.push_back(pairs);
    if (pairs < 30) table.sparse_warning = true;
  }
  return table;
}

VariogramTable empirical_variogram(const FieldSample& sample, int axis, std::size_t max_lag) {
  return empirical_variogram(std::span<const FieldSample>(&sample, 1), axis, max_lag);
}

double anderson_darling(std::span<const double> sample) {
  const std::size_t n = sample.size();
  if (n < 8) throw ValidationError("normality check needs at least 8 values");
  std::vector<double> x(sample.begin(), sample.end());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n - 1);
  if (!(var > 0.0)) throw NumericalError("normality check on a constant sample");
  const double sd = std::sqrt(var);
  std::sort(x.begin(), x.end());
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double zi = (x[i] - mean) / sd;
    const double zj = (x[n - 1 - i] - mean) / sd;
    const double lo = std::log(0.5 * std::erfc(-zi / std::numbers::sqrt2));
    const double hi = std::log(0.5 * std::erfc(zj / std::numbers::sqrt2));
    s += (2.0 * static_cast<double>(i) + 1.0) * (lo + hi);
  }
  const double dn = static_cast<double>(n);
  const double a2 = -dn - s / dn;
  return a2 * (1.0 + 0.75 / dn + 2.25 / (dn * dn));
}

bool passes_normality(std::span<const double> sample) { return anderson_darling(sample) < 1.035; }

}  // namespace anisofield
