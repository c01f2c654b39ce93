#include "jacobi/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "jacobi/core.hpp"
#include "jacobi/detkit.hpp"
#include "jacobi/io.hpp"
#include "jacobi/parallel.hpp"
#include "jacobi/pavlov.hpp"
#include "jacobi/scattering.hpp"
#include "jacobi/spectra.hpp"

namespace jacobi::cli {

namespace {

using ojson = nlohmann::ordered_json;

constexpr double kPi = 3.14159265358979323846;
constexpr int kOk = 0, kError = 1, kMismatch = 2;

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string csv_cell(const Cell& c) {
  if (auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  if (auto* d = std::get_if<double>(&c)) return fmt_double(*d);
  if (auto* b = std::get_if<bool>(&c)) return *b ? "true" : "false";
  const std::string& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

ojson json_cell(const Cell& c) {
  if (auto* i = std::get_if<long long>(&c)) return *i;
  if (auto* d = std::get_if<double>(&c)) return std::isfinite(*d) ? ojson(*d == 0.0 ? 0.0 : *d) : ojson(fmt_double(*d));
  if (auto* b = std::get_if<bool>(&c)) return *b;
  return std::get<std::string>(c);
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out_path.empty())
    out << text;
  else
    io::write_text_file(cfg.out_path, text);
}

void emit_table(const RunConfig& cfg, const Table& t, std::ostream& out) { emit(cfg, t.render(cfg.format), out); }

RootOptions root_options(const RunConfig& cfg) {
  RootOptions opt;
  opt.seed = cfg.seed;
  return opt;
}

std::string fmt_cplx(cplx v) { return fmt_double(v.real()) + (v.imag() < 0 ? "" : "+") + fmt_double(v.imag()) + "i"; }

int cmd_det(const RunConfig& cfg, std::ostream& out) {
  const ComplexJacobiSpec spec = io::load_complex_spec(cfg.spec_path);
  const int N = cfg.grid;
  std::vector<cplx> zs(N), vals(N);
  std::vector<double> bounds(N, 0.0);
  for (int j = 0; j < N; ++j) zs[j] = std::polar(cfg.radius, 2 * kPi * j / N);

  if (cfg.engine == "series") {
    const DeterminantSeries series = determinant_series(spec, cfg.order);
    parallel_for(N, [&](std::size_t j) {
      SeriesValue v = eval_series(series, zs[j]);
      vals[j] = v.value;
      bounds[j] = v.error_bound;
    });
  } else if (cfg.engine == "ratio") {
    parallel_for(N, [&](std::size_t j) {
      SeriesValue v = det_ratio_estimate(spec, zs[j]);
      vals[j] = v.value;
      bounds[j] = v.error_bound;
    });
  } else {
    // rounding estimate of the backward recursion
    const double rounding =
        16 * std::numeric_limits<double>::epsilon() * (spec.support() + 2) * envelope(spec).Hprod_all(0);
    parallel_for(N, [&](std::size_t j) {
      vals[j] = det_volterra(spec, zs[j], -1);
      bounds[j] = rounding * std::max(1.0, std::abs(vals[j]));
    });
  }

  Table t({"re_z", "im_z", "re_delta", "im_delta", "error_bound"});
  for (int j = 0; j < N; ++j) t.add({zs[j].real(), zs[j].imag(), vals[j].real(), vals[j].imag(), bounds[j]});
  emit_table(cfg, t, out);
  return kOk;
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const ComplexJacobiSpec spec = io::load_complex_spec(cfg.spec_path);
  const SpectrumResult res = discrete_spectrum(spec, cfg.radius, root_options(cfg));
  const std::vector<cplx> oracle = dense_truncation_oracle(spec, cfg.oracle_m);
  const OracleComparison cmp = compare_with_oracle(res, oracle, cfg.radius, cfg.match_tol);

  Table t({"re_lambda", "im_lambda", "mult", "residual", "oracle_match"});
  std::size_t slot = 0;
  for (const auto& e : res.eigenvalues) {
    bool any_missing = false, all_skipped = true;
    for (int k = 0; k < e.multiplicity; ++k, ++slot) {
      any_missing = any_missing || cmp.partner[slot] == -1;
      all_skipped = all_skipped && cmp.partner[slot] == -2;
    }
    const std::string match = all_skipped ? "not_compared" : any_missing ? "no" : "yes";
    t.add({e.lambda.real(), e.lambda.imag(), static_cast<long long>(e.multiplicity), e.residual, match});
  }
  emit_table(cfg, t, out);
  for (const auto& w : res.warnings) err << "warning: " << w << "\n";
  for (int j : cmp.unmatched_oracle) err << "oracle eigenvalue without partner: " << fmt_cplx(oracle[j]) << "\n";
  if (!cmp.agree) {
    err << "spectrum: root finder and dense oracle disagree\n";
    return kMismatch;
  }
  return kOk;
}

int cmd_singularities(const RunConfig& cfg, std::ostream& out) {
  const ComplexJacobiSpec spec = io::load_complex_spec(cfg.spec_path);
  Table t({"re_zeta", "im_zeta", "lambda", "abs_delta"});
  for (const auto& s : spectral_singularities(spec, cfg.singular_grid))
    t.add({s.zeta.real(), s.zeta.imag(), s.lambda, s.abs_delta});
  emit_table(cfg, t, out);
  return kOk;
}

ojson data_file(const ScatteringData& d) {
  ojson j;
  j["grid_k"] = d.grid_k;
  j["grid_size"] = 1LL << d.grid_k;
  j["F"] = d.F;
  j["F_negative"] = d.Fneg;
  return j;
}

ScatteringData read_data_file(const std::string& path) {
  const io::json j = io::read_json_file(path);
  if (!j.is_object() || !j.contains("grid_k") || !j.at("grid_k").is_number_integer())
    throw ParseError(path + ": field 'grid_k': expected integer");
  if (!j.contains("F") || !j.at("F").is_array()) throw ParseError(path + ": field 'F': expected array");
  const int k = j.at("grid_k").get<int>();
  if (j.contains("grid_size") && j.at("grid_size").get<long long>() != (1LL << k))
    throw ParseError(path + ": field 'grid_size' does not equal 2^grid_k");
  std::vector<double> F;
  const io::json& arr = j.at("F");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) throw ParseError(path + ": F[" + std::to_string(i) + "]: expected number");
    F.push_back(arr[i].get<double>());
  }
  return scattering_from_coefficients(std::move(F), k);
}

Table coefficient_table(const RealJacobiSpec& s) {
  Table t({"n", "a", "b"});
  for (int n = 0; n < s.support(); ++n) t.add({static_cast<long long>(n), s.a(n), s.b(n)});
  return t;
}

int cmd_scatter(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.action == "forward") {
    const RealJacobiSpec spec = io::load_real_spec(cfg.spec_path);
    const ScatteringData d = scattering_function(spec, cfg.grid_k);
    if (d.aliasing > 1e-12) err << "warning: Jost zero near the circle, wrapped tail ~" << fmt_double(d.aliasing) << "\n";
    emit(cfg, data_file(d).dump(2) + "\n", out);
    return kOk;
  }
  InverseOptions iopt;
  iopt.n_max = cfg.n_max;
  if (cfg.action == "inverse") {
    const ScatteringData d = read_data_file(cfg.data_path);
    MarchenkoSolution sol = inverse_scattering(d, iopt);
    if (!cfg.spec_out.empty()) io::save_spec(cfg.spec_out, sol.reconstructed);
    emit_table(cfg, coefficient_table(sol.reconstructed), out);
    return kOk;
  }
  // roundtrip through the data-file representation, F(n) for n >= 0 only
  const RealJacobiSpec spec = io::load_real_spec(cfg.spec_path);
  const ScatteringData fwd = scattering_function(spec, cfg.grid_k);
  if (fwd.aliasing > 1e-12) err << "warning: Jost zero near the circle, wrapped tail ~" << fmt_double(fwd.aliasing) << "\n";
  const ScatteringData d = scattering_from_coefficients(fwd.F, cfg.grid_k);
  iopt.support_hint = spec.support();
  MarchenkoSolution sol = inverse_scattering(d, iopt);
  const RealJacobiSpec& rec = sol.reconstructed;
  Table t({"n", "a", "b", "a_reconstructed", "b_reconstructed", "error"});
  double worst = 0;
  for (int n = 0; n < std::max(spec.support(), rec.support()); ++n) {
    const double e = std::max(std::abs(spec.a(n) - rec.a(n)), std::abs(spec.b(n) - rec.b(n)));
    worst = std::max(worst, e);
    t.add({static_cast<long long>(n), spec.a(n), spec.b(n), rec.a(n), rec.b(n), e});
  }
  emit_table(cfg, t, out);
  if (worst > cfg.tol) {
    err << "scatter roundtrip: max entry error " << fmt_double(worst) << " exceeds " << fmt_double(cfg.tol) << "\n";
    return kMismatch;
  }
  return kOk;
}

int pavlov_report(const RunConfig& cfg, const ComplexJacobiSpec& spec, const PavlovModel& model,
                  const AssembledMatrix* mat, bool verify, std::ostream& out, std::ostream& err) {
  const std::vector<cplx> predicted = predicted_eigenvalues(model);
  AccumulationReport rep;
  if (verify) {
    AccumulationOptions aopt;
    aopt.oracle_m = cfg.oracle_m;
    aopt.radius = cfg.radius;
    aopt.roots = root_options(cfg);
    rep = verify_accumulation(spec, predicted, aopt);
  }
  Table t({"k", "t_k", "re_lambda", "im_lambda", "matched", "residual"});
  bool residual_ok = true;
  for (std::size_t k = 0; k < predicted.size(); ++k) {
    double res = -1;
    if (mat) {
      res = weyl_pole_residual(model, *mat, predicted[k]);
      residual_ok = residual_ok && res <= 1e-6;
    }
    const bool matched = verify && rep.rows[k].matched;
    t.add({static_cast<long long>(k + 1), model.roots[k], predicted[k].real(), predicted[k].imag(), matched, res});
  }
  emit_table(cfg, t, out);
  for (const auto& w : model.warnings) err << "warning: " << w << "\n";
  if (!verify) return residual_ok ? kOk : kMismatch;
  for (const auto& w : rep.warnings) err << "warning: " << w << "\n";
  for (const auto& r : rep.rows)
    if (r.matched) err << "matched lambda_" << r.k << ": " << fmt_cplx(r.computed) << "\n";
  const int need = std::min<int>(2, static_cast<int>(predicted.size()));
  if (rep.matched < need || !rep.real_parts_ok || !residual_ok) {
    err << "pavlov: " << rep.matched << " matched, real parts " << (rep.real_parts_ok ? "ok" : "off axis")
        << ", residuals " << (residual_ok ? "ok" : "above 1e-6") << "\n";
    return kMismatch;
  }
  return kOk;
}

int cmd_pavlov(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.action == "build") {
    PavlovBuild b = build_pavlov_matrix(cfg.gamma, cfg.kappa, cfg.pavlov_nmax, cfg.nodes, cfg.count);
    if (!cfg.spec_out.empty()) io::save_spec(cfg.spec_out, b.matrix.spec);
    err << "assembled support " << b.matrix.spec.support() << ", alpha " << fmt_double(b.model.herglotz.alpha)
        << ", A " << fmt_double(b.model.herglotz.A) << "\n";
    return pavlov_report(cfg, b.matrix.spec, b.model, &b.matrix, false, out, err);
  }
  const ComplexJacobiSpec spec = io::load_complex_spec(cfg.spec_path);
  PavlovModel model(cfg.gamma, cfg.kappa);
  find_roots(model, cfg.count);
  if (cfg.kappa != 0.0) return pavlov_report(cfg, spec, model, nullptr, true, out, err);
  herglotz_constants(model);
  AssembledMatrix mat;
  mat.spec = spec;
  mat.a0 = spec.a(0);
  mat.b0 = spec.b(0);
  return pavlov_report(cfg, spec, model, &mat, true, out, err);
}

std::vector<double> read_points(const std::string& path) {
  const io::json j = io::read_json_file(path);
  if (!j.is_array()) throw ParseError(path + ": expected a JSON array of numbers");
  std::vector<double> pts;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ParseError(path + ": [" + std::to_string(i) + "]: expected number");
    pts.push_back(j[i].get<double>());
  }
  return pts;
}

int cmd_metrics(const RunConfig& cfg, std::ostream& out) {
  Table t({"metric", "value"});
  if (!cfg.points_path.empty() || cfg.cantor_depth >= 0) {
    const std::vector<double> pts =
        cfg.points_path.empty() ? cantor_points(cfg.cantor_depth) : read_points(cfg.points_path);
    const PointSetMetrics m = limit_set_metrics(pts);
    double largest = 0, total = 0;
    for (double g : m.gaps) {
      largest = std::max(largest, g);
      total += g;
    }
    t.add({std::string("point_count"), static_cast<double>(m.points.size())});
    t.add({std::string("gap_count"), static_cast<double>(m.gaps.size())});
    t.add({std::string("largest_gap"), largest});
    t.add({std::string("total_gap"), total});
    t.add({std::string("tau"), m.tau_estimate});
  }
  if (!cfg.spec_path.empty()) {
    const ComplexJacobiSpec spec = io::load_complex_spec(cfg.spec_path);
    std::vector<std::pair<double, double>> samples;
    for (int n = 0; n < spec.support(); ++n) {
      const double d = std::abs(spec.a(n) - 0.5) + std::abs(spec.b(n)) + std::abs(spec.c(n) - 0.5);
      if (d >= 1e-12 && d <= 1e-2) samples.push_back({static_cast<double>(n), d});
    }
    const DecayFit fit = classify_decay(samples);
    t.add({std::string("decay_samples"), static_cast<double>(samples.size())});
    t.add({std::string("decay_finite_support"), fit.finite_support ? 1.0 : 0.0});
    t.add({std::string("decay_beta"), fit.beta});
    t.add({std::string("decay_C1"), fit.C1});
    t.add({std::string("decay_C2"), fit.C2});
    t.add({std::string("decay_residual"), fit.residual});
  }
  emit_table(cfg, t, out);
  return kOk;
}

void add_common(CLI::App* sub, RunConfig& cfg, std::string& format) {
  sub->add_option("--seed", cfg.seed, "seed for randomized internals")->capture_default_str();
  sub->add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  sub->add_option("--out", cfg.out_path, "output file (default stdout)");
}

}  // namespace

void RunConfig::validate() const {
  auto need = [](bool ok, const std::string& msg) {
    if (!ok) throw DomainError(msg);
  };
  need(radius > 0 && radius < 1, "radius must lie in (0, 1)");
  need(tol > 0 && match_tol > 0, "tolerances must be positive");
  if (command == "det") {
    need(grid >= 1, "grid must be >= 1");
    need(engine == "ratio" || engine == "volterra" || engine == "series", "engine must be ratio, volterra or series");
    need(order >= 0, "order must be >= 0");
  }
  if (command == "spectrum") need(oracle_m >= 10, "oracle size must be >= 10");
  if (command == "singularities") need(singular_grid >= 8, "grid must be >= 8");
  if (command == "scatter") need(grid_k >= 4 && grid_k <= 24, "FFT grid exponent must lie in [4, 24]");
  if (command == "pavlov") {
    need(gamma > 0 && gamma < 1, "gamma must lie in (0, 1)");
    need(kappa > -1 && kappa < 1, "kappa must lie in (-1, 1)");
    need(count >= 1, "count must be >= 1");
    need(pavlov_nmax >= 1, "nmax must be >= 1");
  }
}

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns_.size()) throw DomainError("Table::add: row width does not match the header");
  rows_.push_back(std::move(row));
}

std::string Table::render(Format format) const {
  if (format == Format::Json) {
    ojson arr = ojson::array();
    for (const auto& row : rows_) {
      ojson obj = ojson::object();
      for (std::size_t i = 0; i < columns_.size(); ++i) obj[columns_[i]] = json_cell(row[i]);
      arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
  }
  std::ostringstream os;
  for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << columns_[i];
  os << "\n";
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
    os << "\n";
  }
  return os.str();
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.validate();
    if (config.command == "det") return cmd_det(config, out);
    if (config.command == "spectrum") return cmd_spectrum(config, out, err);
    if (config.command == "singularities") return cmd_singularities(config, out);
    if (config.command == "scatter") return cmd_scatter(config, out, err);
    if (config.command == "pavlov") return cmd_pavlov(config, out, err);
    if (config.command == "metrics") return cmd_metrics(config, out);
    err << "error: unknown subcommand '" << config.command << "'\n";
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kError;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  std::string format = "csv";
  double det_radius = 0.9, spec_radius = 0.995, pav_radius = 0.995;
  int pav_oracle = 400;

  CLI::App app{"Spectral toolkit for complex Jacobi matrices", "jacobi-spectra"};
  app.require_subcommand(1);

  auto* det = app.add_subcommand("det", "perturbation determinant on a circle");
  det->add_option("--spec", cfg.spec_path, "spec file")->required();
  det->add_option("--engine", cfg.engine, "ratio | volterra | series")->capture_default_str();
  det->add_option("--grid", cfg.grid, "number of points on the circle")->capture_default_str();
  det->add_option("--radius", det_radius, "circle radius")->capture_default_str();
  det->add_option("--order", cfg.order, "Taylor order for the series engine")->capture_default_str();
  add_common(det, cfg, format);

  auto* spectrum = app.add_subcommand("spectrum", "discrete spectrum checked against the dense oracle");
  spectrum->add_option("--spec", cfg.spec_path, "spec file")->required();
  spectrum->add_option("--radius", spec_radius, "search radius in the disk")->capture_default_str();
  spectrum->add_option("--oracle", cfg.oracle_m, "dense truncation size m")->capture_default_str();
  spectrum->add_option("--match-tol", cfg.match_tol, "oracle match tolerance")->capture_default_str();
  add_common(spectrum, cfg, format);

  auto* sing = app.add_subcommand("singularities", "zeros of the determinant on the unit circle");
  sing->add_option("--spec", cfg.spec_path, "spec file")->required();
  sing->add_option("--grid", cfg.singular_grid, "circle sampling size")->capture_default_str();
  add_common(sing, cfg, format);

  auto* scatter = app.add_subcommand("scatter", "forward and inverse scattering");
  scatter->require_subcommand(1);
  auto* fwd = scatter->add_subcommand("forward", "write the F(n) data file");
  fwd->add_option("--spec", cfg.spec_path, "real spec file")->required();
  fwd->add_option("--grid-k", cfg.grid_k, "FFT size 2^k")->capture_default_str();
  add_common(fwd, cfg, format);
  auto* inv = scatter->add_subcommand("inverse", "reconstruct coefficients from a data file");
  inv->add_option("--data", cfg.data_path, "data file")->required();
  inv->add_option("--nmax", cfg.n_max, "number of reconstructed rows (-1: from the decay of F)")->capture_default_str();
  inv->add_option("--spec-out", cfg.spec_out, "write the reconstructed spec here");
  add_common(inv, cfg, format);
  auto* rt = scatter->add_subcommand("roundtrip", "forward then inverse, compared entrywise");
  rt->add_option("--spec", cfg.spec_path, "real spec file")->required();
  rt->add_option("--tol", cfg.tol, "entrywise tolerance")->capture_default_str();
  rt->add_option("--grid-k", cfg.grid_k, "FFT size 2^k")->capture_default_str();
  add_common(rt, cfg, format);

  auto* pav = app.add_subcommand("pavlov", "matrix with accumulating eigenvalues");
  pav->require_subcommand(1);
  auto* build = pav->add_subcommand("build", "assemble the matrix");
  build->add_option("--gamma", cfg.gamma, "gamma in (0, 1)")->capture_default_str();
  build->add_option("--kappa", cfg.kappa, "disk shift in (-1, 1)")->capture_default_str();
  build->add_option("--nmax", cfg.pavlov_nmax, "recurrence rows")->capture_default_str();
  build->add_option("--nodes", cfg.nodes, "weight nodes (0: 8 nmax)")->capture_default_str();
  build->add_option("--count", cfg.count, "roots listed")->capture_default_str();
  add_common(build, cfg, format);
  auto* verify = pav->add_subcommand("verify", "match predicted eigenvalues");
  verify->add_option("--spec", cfg.spec_path, "assembled spec file")->required();
  verify->add_option("--gamma", cfg.gamma, "gamma in (0, 1)")->capture_default_str();
  verify->add_option("--kappa", cfg.kappa, "disk shift in (-1, 1)")->capture_default_str();
  verify->add_option("--count", cfg.count, "predicted eigenvalues checked")->capture_default_str();
  verify->add_option("--oracle", pav_oracle, "dense truncation size m")->capture_default_str();
  verify->add_option("--radius", pav_radius, "disk search radius")->capture_default_str();
  add_common(verify, cfg, format);

  auto* metrics = app.add_subcommand("metrics", "limit-set and decay metrics");
  auto* pts = metrics->add_option("--points", cfg.points_path, "JSON array of points in [-1, 1]");
  metrics->add_option("--cantor", cfg.cantor_depth, "middle-thirds fixture depth")->excludes(pts);
  metrics->add_option("--spec", cfg.spec_path, "fit the decay class of this spec");
  add_common(metrics, cfg, format);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kError;
  }

  for (auto* sub : app.get_subcommands()) {
    cfg.command = sub->get_name();
    for (auto* leaf : sub->get_subcommands()) cfg.action = leaf->get_name();
  }
  cfg.format = format == "json" ? Format::Json : Format::Csv;
  if (cfg.command == "det") cfg.radius = det_radius;
  if (cfg.command == "spectrum") cfg.radius = spec_radius;
  if (cfg.command == "pavlov") {
    cfg.radius = pav_radius;
    cfg.oracle_m = pav_oracle;
  }
  // pavlov build: --out names the spec file, the table goes to stdout
  if (cfg.command == "pavlov" && cfg.action == "build") std::swap(cfg.spec_out, cfg.out_path);
  return run(cfg, out, err);
}

}  // namespace jacobi::cli
