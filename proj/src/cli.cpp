#include "anisofield/cli.hpp"

#include <CLI11.hpp>
#include <iostream>
#include <optional>

#include "anisofield/acceptance.hpp"
#include "anisofield/error.hpp"
#include "anisofield/fractal.hpp"
#include "anisofield/gneiting.hpp"
#include "anisofield/io.hpp"
#include "anisofield/kriging.hpp"
#include "anisofield/parallel.hpp"
#include "anisofield/simulation.hpp"
#include "anisofield/smoothness.hpp"
#include "anisofield/variogram.hpp"

namespace anisofield::cli {
namespace {

using nlohmann::json;

struct QuadFlags {
  std::optional<double> truncation;
  std::optional<int> panels;
  std::optional<int> tail_order;
  std::optional<double> rel_tol;
  std::optional<int> order;

  void attach(CLI::App* app) {
    app->add_option("--truncation", truncation, "Frequency cube half-width (default: automatic)");
    app->add_option("--panels", panels, "Uniform panels per axis in the oscillatory band (>= 8)");
    app->add_option("--tail-order", tail_order, "0 drops the far tail, 1 extrapolates it");
    app->add_option("--rel-tol", rel_tol, "Relative error tolerance in (0, 0.1)");
    app->add_option("--order", order, "Gauss-Legendre nodes per panel");
  }

  QuadratureSpec resolve(int dims) const {
    QuadratureSpec q = QuadratureSpec::defaults(dims);
    if (truncation) q.truncation = *truncation;
    if (panels) q.panels = *panels;
    if (tail_order) q.tail_order = *tail_order;
    if (rel_tol) q.rel_tol = *rel_tol;
    if (order) q.order = *order;
    q.validate();
    return q;
  }
};

struct Options {
  unsigned threads = 0;
  std::string model_path, gneiting_path, out_path;
  std::string lags_path, obs_path, targets_path;
  std::string grid_text;
  std::size_t lattice = 0;
  std::uint64_t seed = 0;
  int realizations = 1;
  int channels = 1;
  std::string format;
  bool pin_origin = false;
  int p = 1;
  std::string suite = "all";
  QuadFlags quad;
};

void emit(const Options& opt, const std::string& contents) {
  if (opt.out_path.empty() || opt.out_path == "-")
    std::cout << contents;
  else
    io::write_atomic(opt.out_path, contents);
}

json meta(const json& model, const std::optional<QuadratureSpec>& quad, std::optional<std::uint64_t> seed) {
  json m;
  m["tool"] = "anisofield";
  m["version"] = ANISOFIELD_VERSION;
  m["model"] = model;
  if (quad) m["quadrature"] = quadrature_to_json(*quad);
  if (seed) m["seed"] = *seed;
  return m;
}

std::vector<std::string> csv_meta(const json& m) {
  std::vector<std::string> lines;
  lines.push_back("anisofield " + m["version"].get<std::string>());
  for (const auto& item : m.items()) {
    if (item.key() == "tool" || item.key() == "version") continue;
    lines.push_back(item.key() + ": " + item.value().dump());
  }
  return lines;
}

std::vector<std::string> axis_header(const std::string& prefix, int dims) {
  std::vector<std::string> h;
  for (int j = 1; j <= dims; ++j) h.push_back(prefix + std::to_string(j));
  return h;
}

SpectralModel load_model(const Options& opt) {
  if (opt.model_path.empty()) throw ValidationError("--model is required");
  return model_from_json(io::read_json(opt.model_path));
}

json exponents_json(const SmoothnessExponents& ex) {
  return json{{"h", ex.h}, {"q", ex.q}, {"h_bar", ex.h_bar}};
}

json level_json(const LevelSetDimension& l) {
  json j{{"status", to_string(l.status)}, {"holds", "with positive probability"}};
  if (l.status == LevelStatus::Value) {
    j["value"] = l.value;
    j["argmin_k"] = l.argmin_k;
  }
  return j;
}

json dimension_json(const DimensionReport& r) {
  json j{{"h_bar_sorted", r.h_bar_sorted},
         {"p", r.p},
         {"range_dim", r.range_dim},
         {"graph_dim", r.graph.value},
         {"graph_argmin_k", r.graph.argmin_k},
         {"level_dim", level_json(r.level)},
         {"provenance", r.provenance}};
  if (r.piecewise_range) {
    j["closed_form"] = json{{"range_dim", *r.piecewise_range},
                            {"graph_dim", *r.piecewise_graph},
                            {"level_dim", level_json(*r.piecewise_level)}};
  }
  return j;
}

int cmd_analyze(const Options& opt) {
  const SpectralModel model = load_model(opt);
  const Legitimacy legit = legitimacy_check(model);
  if (!legit.legitimate) throw ValidationError("illegitimate spectral density: " + legit.reason);
  const QuadratureSpec quad = opt.quad.resolve(model.dims());
  const SmoothnessReport rep = ms_derivative_report(model, quad);
  json dirs = json::array();
  for (int j = 0; j < model.dims(); ++j) {
    const auto& d = rep.directions[j];
    json e{{"axis", j + 1}, {"h", rep.exponents.h[j]}, {"exists_ms_partial", d.exists_ms_partial}, {"margin", d.margin}};
    e["derivative_variance"] = d.derivative_variance ? json(*d.derivative_variance) : json(nullptr);
    dirs.push_back(e);
  }
  json out;
  out["meta"] = meta(model_to_json(model), quad, std::nullopt);
  out["legitimate"] = true;
  out["exponents"] = exponents_json(rep.exponents);
  out["directions"] = dirs;
  out["ms_differentiable"] = rep.ms_differentiable;
  out["sample_path_differentiable"] = rep.sample_path_differentiable;
  out["noninteger_alpha"] = rep.noninteger_alpha;
  out["dimensions"] = dimension_json(dimension_report(rep.exponents, opt.p));
  emit(opt, io::dump_json(out));
  return 0;
}

int cmd_variogram(const Options& opt) {
  const SpectralModel model = load_model(opt);
  const QuadratureSpec quad = opt.quad.resolve(model.dims());
  if (opt.lags_path.empty()) throw ValidationError("--lags is required");
  const io::CsvTable lags = io::read_csv(opt.lags_path);
  if (static_cast<int>(lags.header.size()) != model.dims())
    throw ValidationError("lags CSV must have one column per model dimension");
  const VariogramTable t = variogram_table(model, lags.rows, quad);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < t.values.size(); ++i) {
    std::vector<double> r = t.lags[i];
    r.push_back(t.values[i]);
    r.push_back(t.err[i]);
    rows.push_back(std::move(r));
  }
  auto header = axis_header("h_", model.dims());
  header.push_back("value");
  header.push_back("err");
  std::vector<std::string> comments = csv_meta(meta(model_to_json(model), quad, std::nullopt));
  comments.push_back("model_id: " + t.model_id);
  emit(opt, io::render_csv(comments, header, rows));
  return 0;
}

int cmd_simulate(const Options& opt) {
  if (opt.grid_text.empty()) throw ValidationError("--grid is required");
  if (opt.realizations < 1) throw ValidationError("--realizations must be >= 1");
  const Grid grid = Grid::parse(opt.grid_text);
  std::vector<FieldSample> fields;
  json model_doc;
  if (!opt.gneiting_path.empty()) {
    if (!opt.model_path.empty()) throw ValidationError("give either --model or --gneiting, not both");
    if (opt.channels != 1) throw ValidationError("--channels applies to spectral models only");
    const GneitingModel gm = gneiting_from_json(io::read_json(opt.gneiting_path));
    model_doc = gneiting_to_json(gm);
    for (int r = 0; r < opt.realizations; ++r)
      fields.push_back(sample_stationary_exact(gm, grid, opt.seed + r, opt.pin_origin));
  } else {
    const SpectralModel model = load_model(opt);
    model_doc = model_to_json(model);
    const std::size_t lattice = opt.lattice ? opt.lattice : (model.dims() == 1 ? 4096 : model.dims() == 2 ? 256 : 32);
    for (int r = 0; r < opt.realizations; ++r)
      fields.push_back(multi_copy_field(model, grid, lattice, opt.channels, opt.seed + r));
  }

  std::string format = opt.format;
  if (format.empty()) {
    const std::string& o = opt.out_path;
    format = o.size() > 6 && o.substr(o.size() - 6) == ".afld1" ? "afld1" : "csv";
  }
  if (format == "afld1") {
    if (opt.out_path.empty() || opt.out_path == "-") throw ValidationError("afld1 output needs --out <file>");
    std::string bytes;
    for (const auto& f : fields) bytes += io::encode_afld1(f);
    emit(opt, bytes);
    return 0;
  }
  if (format != "csv") throw ValidationError("--format must be csv or afld1");

  const bool multi = opt.realizations > 1;
  std::vector<std::string> header;
  if (multi) header.push_back("realization");
  for (const auto& h : axis_header("t_", grid.dims())) header.push_back(h);
  header.push_back("channel");
  header.push_back("value");
  std::vector<std::vector<double>> rows;
  for (std::size_t r = 0; r < fields.size(); ++r) {
    const FieldSample& f = fields[r];
    for (int c = 0; c < f.channels; ++c) {
      for (std::size_t i = 0; i < grid.points(); ++i) {
        std::vector<double> row;
        if (multi) row.push_back(static_cast<double>(r));
        for (double t : grid.point(i)) row.push_back(t);
        row.push_back(c);
        row.push_back(f.at(c, i));
        rows.push_back(std::move(row));
      }
    }
  }
  json m = meta(model_doc, std::nullopt, opt.seed);
  const SynthesisInfo& s = fields.front().synthesis;
  m["synthesis"] = json{{"method", s.method}, {"lattice", s.lattice}, {"cells", s.cells},
                        {"low_shells", s.low_shells}, {"high_shells", s.high_shells}, {"jitter", s.jitter},
                        {"realizations", opt.realizations}, {"seed_rule", "realization r uses seed + r"}};
  emit(opt, io::render_csv(csv_meta(m), header, rows));
  return 0;
}

int cmd_krige(const Options& opt) {
  const SpectralModel model = load_model(opt);
  const QuadratureSpec quad = opt.quad.resolve(model.dims());
  if (opt.obs_path.empty() || opt.targets_path.empty()) throw ValidationError("--obs and --targets are required");
  const int dims = model.dims();
  const io::CsvTable obs_csv = io::read_csv(opt.obs_path);
  if (static_cast<int>(obs_csv.header.size()) != dims + 1)
    throw ValidationError("observation CSV must have columns t_1..t_N,value");
  Observations obs;
  for (const auto& r : obs_csv.rows) {
    obs.sites.emplace_back(r.begin(), r.begin() + dims);
    obs.values.push_back(r[dims]);
  }
  const io::CsvTable targets = io::read_csv(opt.targets_path);
  if (static_cast<int>(targets.header.size()) != dims)
    throw ValidationError("targets CSV must have columns t_1..t_N");
  SimpleKriging k(model, obs, quad);
  std::vector<std::vector<double>> rows;
  for (const auto& u : targets.rows) {
    const KrigingResult r = k.predict(u);
    std::vector<double> row = u;
    row.push_back(r.prediction);
    row.push_back(r.variance);
    rows.push_back(std::move(row));
  }
  auto header = axis_header("t_", dims);
  header.push_back("prediction");
  header.push_back("variance");
  json m = meta(model_to_json(model), quad, std::nullopt);
  m["jitter"] = k.jitter();
  emit(opt, io::render_csv(csv_meta(m), header, rows));
  return 0;
}

int cmd_dims(const Options& opt) {
  json out;
  if (!opt.gneiting_path.empty()) {
    if (!opt.model_path.empty()) throw ValidationError("give either --model or --gneiting, not both");
    const GneitingModel gm = gneiting_from_json(io::read_json(opt.gneiting_path));
    out = dimension_json(gneiting_dimensions(gm, opt.p));
    out["meta"] = meta(gneiting_to_json(gm), std::nullopt, std::nullopt);
  } else {
    const SpectralModel model = load_model(opt);
    out = dimension_json(dimension_report(smoothness_exponents(model), opt.p));
    out["meta"] = meta(model_to_json(model), std::nullopt, std::nullopt);
  }
  emit(opt, io::dump_json(out));
  return 0;
}

int cmd_verify(const Options& opt) {
  const std::vector<CriterionResult> results = run_acceptance(opt.suite);
  bool all = true;
  for (const auto& r : results) {
    std::cout << format_result(r) << "\n";
    all = all && r.passed;
  }
  std::cout << (all ? "all criteria passed" : "some criteria FAILED") << std::endl;
  return all ? 0 : 2;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Anisotropic Gaussian random fields: spectral models, variograms, simulation, kriging, dimensions"};
  app.set_version_flag("--version", std::string("anisofield ") + ANISOFIELD_VERSION);
  app.set_config("--config", "", "TOML/INI file with option values; command-line flags take precedence");
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--threads", opt.threads, "Worker thread cap (falls back to ANISOFIELD_THREADS)");

  auto model_opt = [&](CLI::App* sub) { sub->add_option("--model", opt.model_path, "Spectral model JSON"); };
  auto out_opt = [&](CLI::App* sub) { sub->add_option("--out", opt.out_path, "Output path (stdout if omitted)"); };

  CLI::App* analyze = app.add_subcommand("analyze", "Exponents, differentiability verdicts and dimensions of a model");
  model_opt(analyze);
  out_opt(analyze);
  analyze->add_option("--p", opt.p, "Codomain dimension for the dimension report")->check(CLI::PositiveNumber);
  opt.quad.attach(analyze);

  CLI::App* vario = app.add_subcommand("variogram", "Variogram table by spectral quadrature");
  model_opt(vario);
  vario->add_option("--lags", opt.lags_path, "CSV with columns h_1..h_N")->required();
  out_opt(vario);
  opt.quad.attach(vario);

  CLI::App* sim = app.add_subcommand("simulate", "Seeded field samples on a grid");
  model_opt(sim);
  sim->add_option("--gneiting", opt.gneiting_path, "Gneiting model JSON (exact dense sampling)");
  sim->add_option("--grid", opt.grid_text, "start:stop:count per axis, comma separated")->required();
  sim->add_option("--lattice", opt.lattice, "Uniform frequency cells per axis (default 4096/256/32 for N=1/2/3+)");
  sim->add_option("--seed", opt.seed, "Base seed; realization r uses seed + r");
  sim->add_option("--realizations", opt.realizations, "Number of independent realizations");
  sim->add_option("--channels", opt.channels, "Independent copies p of the field")->check(CLI::PositiveNumber);
  sim->add_option("--format", opt.format, "csv or afld1 (default from the --out extension)");
  sim->add_flag("--pin-origin", opt.pin_origin, "Gneiting only: subtract the value at the zero point");
  out_opt(sim);

  CLI::App* kr = app.add_subcommand("krige", "Simple kriging of the pinned field");
  model_opt(kr);
  kr->add_option("--obs", opt.obs_path, "CSV with columns t_1..t_N,value")->required();
  kr->add_option("--targets", opt.targets_path, "CSV with columns t_1..t_N")->required();
  out_opt(kr);
  opt.quad.attach(kr);

  CLI::App* dims = app.add_subcommand("dims", "Hausdorff dimensions of range, graph and level sets");
  model_opt(dims);
  dims->add_option("--gneiting", opt.gneiting_path, "Gneiting model JSON");
  dims->add_option("--p", opt.p, "Codomain dimension")->check(CLI::PositiveNumber);
  out_opt(dims);

  CLI::App* verify = app.add_subcommand("verify", "Run the built-in acceptance battery");
  std::string suites = "all";
  for (const auto& s : acceptance_suites()) suites += ", " + s;
  verify->add_option("--suite", opt.suite, "One of: " + suites);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    set_thread_limit(opt.threads);
    if (*analyze) return cmd_analyze(opt);
    if (*vario) return cmd_variogram(opt);
    if (*sim) return cmd_simulate(opt);
    if (*kr) return cmd_krige(opt);
    if (*dims) return cmd_dims(opt);
    if (*verify) return cmd_verify(opt);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << " (residual " << e.residual() << ")\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 3;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed JSON input: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace anisofield::cli
