#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "twistlap/bundle.hpp"
#include "twistlap/errors.hpp"
#include "twistlap/oracle.hpp"
#include "twistlap/verify.hpp"

namespace twistlap::cli {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Everything a command produces, independent of the output format.
struct Output {
  ordered_json params = ordered_json::object();
  std::vector<double> eigenvalues;
  std::vector<double> residuals;
  std::vector<double> oracle;
  ordered_json report = ordered_json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<ordered_json>> rows;
  std::vector<std::string> notes;  // table format only
  std::optional<std::string> line; // table format override (oracle)
};

struct Common {
  std::string format = "table";
  std::string out;
  std::uint64_t seed = 0;
};

struct GeometryArgs {
  std::string kind;
  double r = kNaN;
  double vol = kNaN;
};

int parse_int(const std::string& s) {
  int v = 0;
  const char* b = s.data();
  const char* e = b + s.size();
  if (!s.empty() && *b == '+') {
    ++b;
  }
  const auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc{} || ptr != e || b == e) {
    throw InvalidParameter("not an integer: '" + s + "'");
  }
  return v;
}

SurfaceGeometry make_geometry(const GeometryArgs& g) {
  if (g.kind == "sphere") {
    if (!std::isnan(g.r)) {
      return make_sphere(g.r);
    }
    if (!std::isnan(g.vol)) {
      if (!(g.vol > 0.0)) {
        throw InvalidParameter("volume must be positive");
      }
      return make_sphere(8.0 * std::numbers::pi / g.vol);
    }
    throw InvalidParameter("sphere needs --R (or --vol)");
  }
  if (g.kind == "torus") {
    if (std::isnan(g.vol)) {
      throw InvalidParameter("torus needs --vol");
    }
    return make_torus(g.vol);
  }
  throw InvalidParameter("unknown geometry '" + g.kind + "'");
}

ordered_json geometry_json(const SurfaceGeometry& g) {
  return {{"kind", std::string(to_string(g.kind()))},
          {"scalar_curvature", g.scalar_curvature()},
          {"volume", g.volume()},
          {"genus", g.genus()}};
}

void add_geometry_options(CLI::App* cmd, GeometryArgs& g) {
  cmd->add_option("--geometry", g.kind, "sphere | torus")
      ->required()
      ->check(CLI::IsMember({"sphere", "torus"}));
  cmd->add_option("--R", g.r, "scalar curvature (sphere)");
  cmd->add_option("--vol", g.vol, "area");
}

std::string cell_text(const ordered_json& v, bool table) {
  if (v.is_null()) {
    return table ? "-" : "";
  }
  if (v.is_number_float()) {
    return format_real(v.get<double>());
  }
  if (v.is_number_integer()) {
    return std::to_string(v.get<long long>());
  }
  if (v.is_boolean()) {
    return v.get<bool>() ? "true" : "false";
  }
  if (v.is_string()) {
    return v.get<std::string>();
  }
  return v.dump();
}

void render(const Output& o, const std::string& format, std::ostream& os) {
  if (format == "json") {
    ordered_json doc;
    doc["params"] = o.params;
    doc["eigenvalues"] = o.eigenvalues;
    doc["residuals"] = o.residuals;
    doc["oracle"] = o.oracle;
    doc["report"] = o.report;
    os << doc.dump(2) << '\n';
    return;
  }
  if (format == "csv") {
    for (std::size_t c = 0; c < o.columns.size(); ++c) {
      os << (c ? "," : "") << o.columns[c];
    }
    os << '\n';
    for (const auto& row : o.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        os << (c ? "," : "") << cell_text(row[c], false);
      }
      os << '\n';
    }
    return;
  }
  if (o.line) {
    os << *o.line << '\n';
    return;
  }
  std::vector<std::size_t> width(o.columns.size());
  for (std::size_t c = 0; c < o.columns.size(); ++c) {
    width[c] = o.columns[c].size();
    for (const auto& row : o.rows) {
      width[c] = std::max(width[c], cell_text(row[c], true).size());
    }
  }
  auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      os << (c ? "  " : "") << cells[c] << std::string(width[c] - cells[c].size(), ' ');
    }
    os << '\n';
  };
  emit(o.columns);
  for (const auto& row : o.rows) {
    std::vector<std::string> cells;
    for (const auto& v : row) {
      cells.push_back(cell_text(v, true));
    }
    emit(cells);
  }
  for (const auto& n : o.notes) {
    os << n << '\n';
  }
}

ordered_json opt(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(); }

// ---- spectrum ----

struct SpectrumArgs {
  GeometryArgs geo;
  std::optional<int> degree;
  std::string op = "dolbeault";
  int grid = 0;
  int k = 6;
  double tol = 1e-8;
  double cluster_tol = 1e-3;
};

// Closed-form values matching the numerics, when the oracle has them.
std::vector<double> spectrum_oracle(const SurfaceGeometry& g, int d, OperatorKind op, int k) {
  const double c = he_constant(1, d, 1, g.volume());
  std::vector<double> dolb;
  if (g.kind() == SurfaceKind::Sphere) {
    if (op == OperatorKind::Dirac) {
      return sphere_dirac_spectrum(g.scalar_curvature(), d + 1, k - 1);
    }
    dolb = sphere_dolbeault_spectrum(g.scalar_curvature(), d, k - 1);
  } else {
    for (const Cluster& cl : torus_dolbeault_spectrum(g.volume(), d, k)) {
      for (int i = 0; i < cl.multiplicity && static_cast<int>(dolb.size()) < k; ++i) {
        dolb.push_back(cl.value);
      }
    }
    if (op == OperatorKind::Dirac) {
      return dirac_from_dolbeault(dolb);
    }
  }
  if (op == OperatorKind::Trace) {
    // Weitzenbock: nabla* nabla = 2 Delta + c.
    for (double& v : dolb) {
      v = 2.0 * v + c;
    }
  }
  return dolb;
}

Output cmd_spectrum(const SpectrumArgs& a, const Common& common) {
  if (!a.degree) {
    throw InvalidParameter("--degree is required");
  }
  const SurfaceGeometry g = make_geometry(a.geo);
  const OperatorKind op = a.op == "dolbeault" ? OperatorKind::Dolbeault
                          : a.op == "trace"   ? OperatorKind::Trace
                                              : OperatorKind::Dirac;
  VerifyConfig cfg;
  cfg.grid = a.grid;
  cfg.k = a.k;
  cfg.tol = a.tol;
  cfg.cluster_tol = a.cluster_tol;
  cfg.seed = common.seed;
  const LowSpectrum s = low_spectrum(g, *a.degree, op, cfg);
  const std::vector<double> oracle = spectrum_oracle(g, *a.degree, op, a.k);

  Output o;
  o.params = {{"command", "spectrum"},  {"geometry", geometry_json(g)}, {"degree", *a.degree},
              {"operator", a.op},        {"grid", s.grid},              {"k", a.k},
              {"tol", a.tol},            {"cluster_tol", a.cluster_tol}, {"seed", common.seed}};
  o.eigenvalues = s.values;
  o.residuals = s.residuals;
  o.oracle = oracle;
  ordered_json clusters = ordered_json::array();
  for (const Cluster& c : s.clusters) {
    clusters.push_back({{"value", c.value}, {"multiplicity", c.multiplicity}});
  }
  o.report = {{"method", s.method}, {"clusters", clusters}, {"modes", s.modes}};
  if (g.kind() == SurfaceKind::Sphere) {
    o.report["mode_min"] = s.mode_min;
    o.report["mode_max"] = s.mode_max;
  }
  o.columns = {"index", "eigenvalue", "residual", "mode"};
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    o.rows.push_back({ordered_json(i), s.values[i], s.residuals[i], s.modes[i]});
  }
  for (const Cluster& c : s.clusters) {
    o.notes.push_back("cluster " + format_real(c.value) + " x" + std::to_string(c.multiplicity));
  }
  if (!oracle.empty()) {
    std::string line = "oracle";
    for (double v : oracle) {
      line += " " + format_real(v);
    }
    o.notes.push_back(line);
  }
  return o;
}

// ---- verify ----

struct VerifyArgs {
  GeometryArgs geo;
  std::string theorem = "main";
  std::string degrees;
  std::optional<int> degree;
  int grid = 0;
  int k = 6;
  double tol = 1e-8;
  bool diagnostics = true;
};

Output cmd_verify(const VerifyArgs& a, const Common& common, bool& violation) {
  const SurfaceGeometry g = make_geometry(a.geo);
  std::vector<int> degrees;
  if (!a.degrees.empty()) {
    degrees = parse_degrees(a.degrees);
  } else if (a.degree) {
    degrees = {*a.degree};
  } else {
    throw InvalidParameter("--degrees (or --degree) is required");
  }
  std::vector<Theorem> theorems;
  if (a.theorem == "all") {
    theorems = {Theorem::Main, Theorem::Cor1, Theorem::Cor2};
    if (g.kind() == SurfaceKind::Torus) {
      theorems.erase(theorems.begin() + 1);  // the complex Dirac check is sphere-only
    }
  } else {
    theorems = {a.theorem == "main" ? Theorem::Main
                : a.theorem == "cor1" ? Theorem::Cor1
                                      : Theorem::Cor2};
  }
  std::vector<SweepItem> items;
  for (Theorem t : theorems) {
    for (int d : degrees) {
      items.push_back({t, d, effective_grid(g.kind(), a.grid)});
    }
  }
  VerifyConfig cfg;
  cfg.k = a.k;
  cfg.tol = a.tol;
  cfg.seed = common.seed;
  cfg.diagnostics = a.diagnostics;
  const std::vector<BoundReport> reports = verify_sweep(g, items, cfg);

  Output o;
  o.params = {{"command", "verify"},
              {"geometry", geometry_json(g)},
              {"theorem", a.theorem},
              {"degrees", degrees},
              {"grid", effective_grid(g.kind(), a.grid)},
              {"k", a.k},
              {"tol", a.tol},
              {"seed", common.seed}};
  o.columns = {"theorem",        "degree",       "effective_degree", "grid",
               "oracle_bound",   "computed_min", "relative_gap",     "numeric_slack",
               "satisfied",      "sharp",        "multiplicity",     "naive_ratio",
               "weitzenbock",    "sharp_defect", "cross_check",      "solver_residual"};
  ordered_json rows = ordered_json::array();
  violation = false;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const BoundReport& r = reports[i];
    const std::string theorem(to_string(items[i].theorem));
    violation = violation || !r.satisfied;
    o.eigenvalues.push_back(r.computed_min);
    o.residuals.push_back(r.solver_residual);
    o.oracle.push_back(r.oracle_bound);
    o.rows.push_back({theorem, r.degree, r.effective_degree, r.grid, r.oracle_bound,
                      r.computed_min, r.relative_gap, r.numeric_slack, r.satisfied, r.sharp,
                      r.ground_multiplicity, opt(r.naive_ratio), opt(r.weitzenbock_residual),
                      opt(r.sharpness_defect), opt(r.cross_check), r.solver_residual});
    ordered_json row = {{"theorem", theorem},
                        {"bound_kind", std::string(to_string(r.bound_kind))},
                        {"degree", r.degree},
                        {"effective_degree", r.effective_degree},
                        {"grid", r.grid},
                        {"mode_min", r.mode_min},
                        {"mode_max", r.mode_max},
                        {"oracle_bound", r.oracle_bound},
                        {"computed_min", r.computed_min},
                        {"relative_gap", r.relative_gap},
                        {"numeric_slack", r.numeric_slack},
                        {"sharp_tol", r.sharp_tol},
                        {"satisfied", r.satisfied},
                        {"expect_sharp", r.expect_sharp},
                        {"sharp", r.sharp},
                        {"ground_multiplicity", r.ground_multiplicity},
                        {"solver_residual", r.solver_residual},
                        {"method", r.method},
                        {"naive_bound", opt(r.naive_bound)},
                        {"naive_ratio", opt(r.naive_ratio)},
                        {"weitzenbock_residual", opt(r.weitzenbock_residual)},
                        {"sharpness_defect", opt(r.sharpness_defect)},
                        {"lemma_value", opt(r.lemma_value)},
                        {"cross_check", opt(r.cross_check)},
                        {"second_bound", opt(r.second_bound)}};
    rows.push_back(std::move(row));
  }
  o.report = {{"rows", rows}, {"all_satisfied", !violation}};
  return o;
}

// ---- convergence ----

struct ConvergenceArgs {
  GeometryArgs geo;
  std::optional<int> degree;
  std::string grids;
  std::string target = "ground";
  int k = 6;
  double tol = 1e-8;
};

Output cmd_convergence(const ConvergenceArgs& a, const Common& common) {
  if (!a.degree) {
    throw InvalidParameter("--degree is required");
  }
  const SurfaceGeometry g = make_geometry(a.geo);
  const std::vector<int> grids = parse_grids(a.grids);
  const ConvergenceTarget target =
      a.target == "ground" ? ConvergenceTarget::GroundEig : ConvergenceTarget::WeitzenbockResidual;
  VerifyConfig cfg;
  cfg.k = a.k;
  cfg.tol = a.tol;
  cfg.seed = common.seed;
  const ConvergenceTable t = convergence_study(g, *a.degree, grids, target, cfg);

  Output o;
  o.params = {{"command", "convergence"}, {"geometry", geometry_json(g)}, {"degree", *a.degree},
              {"grids", grids},            {"target", a.target},         {"tol", a.tol},
              {"seed", common.seed}};
  o.oracle = {t.oracle};
  o.columns = {"grid", "value", "error", "order"};
  ordered_json rows = ordered_json::array();
  for (const ConvergenceRow& r : t.rows) {
    o.eigenvalues.push_back(r.value);
    o.rows.push_back({r.grid, r.value, r.error, opt(r.order)});
    rows.push_back(
        {{"grid", r.grid}, {"value", r.value}, {"error", r.error}, {"order", opt(r.order)}});
  }
  o.report = {{"target", std::string(to_string(target))},
              {"rows", rows},
              {"order", t.exact ? ordered_json("exact") : opt(t.order)}};
  o.notes.push_back("order " + (t.exact ? std::string("exact")
                                        : t.order ? format_real(*t.order) : std::string("-")));
  return o;
}

// ---- oracle ----

struct OracleArgs {
  int n = 1;
  std::optional<int> degree;
  int rank = 1;
  int genus = 0;
  double vol = kNaN;
  double r = kNaN;
  std::optional<int> degl;
  int qmax = 0;
  std::vector<double> values;
};

int need(const std::optional<int>& v, const char* flag) {
  if (!v) {
    throw InvalidParameter(std::string(flag) + " is required");
  }
  return *v;
}

Output cmd_oracle(const std::string& formula, const OracleArgs& a) {
  Output o;
  o.params = {{"command", "oracle"}, {"formula", formula}};
  std::vector<int> mult;
  if (formula == "bound-naive" || formula == "bound-main" || formula == "he-constant") {
    const int d = need(a.degree, "--degree");
    o.params.update({{"n", a.n}, {"degree", d}, {"rank", a.rank}, {"vol", a.vol}});
    const double v = formula == "bound-naive" ? bound_dolbeault_naive(a.n, d, a.rank, a.vol)
                     : formula == "bound-main"
                         ? bound_dolbeault_main(a.n, d, a.rank, a.vol)
                         : he_constant(a.n, d, a.rank, a.vol);
    o.oracle = {v};
  } else if (formula == "bound-dirac-complex") {
    const int d = need(a.degree, "--degree");
    o.params.update({{"degree", d}, {"rank", a.rank}, {"vol", a.vol}});
    o.oracle = {bound_dirac_complex(d, a.rank, a.vol)};
  } else if (formula == "bound-dirac-real") {
    const int d = need(a.degree, "--degree");
    o.params.update({{"genus", a.genus}, {"degree", d}, {"rank", a.rank}, {"vol", a.vol}});
    o.oracle = {bound_dirac_real(a.genus, d, a.rank, a.vol)};
  } else if (formula == "sphere-dirac") {
    const int dl = need(a.degl, "--degL");
    o.params.update({{"R", a.r}, {"degL", dl}, {"qmax", a.qmax}});
    o.oracle = sphere_dirac_spectrum(a.r, dl, a.qmax);
  } else if (formula == "sphere-dolbeault") {
    const int d = need(a.degree, "--degree");
    o.params.update({{"R", a.r}, {"degree", d}, {"qmax", a.qmax}});
    o.oracle = sphere_dolbeault_spectrum(a.r, d, a.qmax);
  } else if (formula == "torus-dolbeault") {
    const int d = need(a.degree, "--degree");
    o.params.update({{"vol", a.vol}, {"degree", d}, {"kmax", a.qmax}});
    for (const Cluster& c : torus_dolbeault_spectrum(a.vol, d, a.qmax)) {
      o.oracle.push_back(c.value);
      mult.push_back(c.multiplicity);
    }
    o.report["multiplicities"] = mult;
  } else if (formula == "dirac-from-dolbeault") {
    o.params["values"] = a.values;
    o.oracle = dirac_from_dolbeault(a.values);
  } else if (formula == "twist-degree") {
    const int d = need(a.degree, "--degree");
    o.params.update({{"degree", d}, {"rank", a.rank}, {"genus", a.genus}});
    o.oracle = {static_cast<double>(half_canonical_twist_degree(d, a.rank, a.genus))};
  }
  o.report["formula"] = formula;
  o.columns = {"index", "value"};
  if (!mult.empty()) {
    o.columns.push_back("multiplicity");
  }
  std::string line;
  for (std::size_t i = 0; i < o.oracle.size(); ++i) {
    std::vector<ordered_json> row = {ordered_json(i), o.oracle[i]};
    line += (i ? " " : "") + format_real(o.oracle[i]);
    if (!mult.empty()) {
      row.push_back(mult[i]);
      line += "x" + std::to_string(mult[i]);
    }
    o.rows.push_back(std::move(row));
  }
  o.line = line;
  return o;
}

void write(const Output& o, const Common& common, std::ostream& out) {
  if (common.out.empty() || common.out == "-") {
    render(o, common.format, out);
    return;
  }
  std::ofstream file(common.out, std::ios::binary);
  if (!file) {
    throw InvalidParameter("cannot open output file '" + common.out + "'");
  }
  render(o, common.format, file);
  if (!file) {
    throw InvalidParameter("failed writing '" + common.out + "'");
  }
}

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--format", c.format, "json | csv | table")
      ->check(CLI::IsMember({"json", "csv", "table"}));
  cmd->add_option("--out", c.out, "output path (default standard output)");
  cmd->add_option("--seed", c.seed, "seed for every random start/probe vector");
}

}  // namespace

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<int> parse_degrees(const std::string& text) {
  std::vector<int> out;
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const int a = parse_int(text.substr(0, dots));
    const int b = parse_int(text.substr(dots + 2));
    const int step = a <= b ? 1 : -1;
    for (int d = a;; d += step) {
      out.push_back(d);
      if (d == b) {
        break;
      }
    }
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      out.push_back(parse_int(item));
    }
  }
  if (out.empty()) {
    throw InvalidParameter("empty degree range '" + text + "'");
  }
  return out;
}

std::vector<int> parse_grids(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(parse_int(item));
  }
  if (out.empty()) {
    throw InvalidParameter("no grid sizes given");
  }
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"twisted Dolbeault / Dirac spectra on line bundles over the sphere and torus",
               "twistlap"};
  app.require_subcommand(1);

  Common common;
  SpectrumArgs sa;
  auto* spectrum = app.add_subcommand("spectrum", "low spectrum of one operator");
  add_geometry_options(spectrum, sa.geo);
  add_common(spectrum, common);
  spectrum->add_option("--degree", sa.degree, "bundle degree (< 0)")->required();
  spectrum->add_option("--operator", sa.op, "dolbeault | trace | dirac")
      ->check(CLI::IsMember({"dolbeault", "trace", "dirac"}));
  spectrum->add_option("--grid", sa.grid, "N (0: 800 sphere, 64 torus)");
  spectrum->add_option("--k", sa.k, "eigenvalue count");
  spectrum->add_option("--tol", sa.tol, "eigenpair residual tolerance");
  spectrum->add_option("--cluster-tol", sa.cluster_tol, "relative clustering tolerance");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "check the lower bounds");
  add_geometry_options(verify, va.geo);
  add_common(verify, common);
  verify->add_option("--theorem", va.theorem, "main | cor1 | cor2 | all")
      ->check(CLI::IsMember({"main", "cor1", "cor2", "all"}));
  verify->add_option("--degrees", va.degrees, "range a..b or list a,b,c");
  verify->add_option("--degree", va.degree, "single degree");
  verify->add_option("--grid", va.grid, "N (0: 800 sphere, 64 torus)");
  verify->add_option("--k", va.k, "eigenvalues per solve");
  verify->add_option("--tol", va.tol, "eigenpair residual tolerance");
  verify->add_flag("!--no-diagnostics", va.diagnostics, "skip Weitzenbock/sharpness checks");

  ConvergenceArgs ca;
  auto* conv = app.add_subcommand("convergence", "grid refinement study");
  add_geometry_options(conv, ca.geo);
  add_common(conv, common);
  conv->add_option("--degree", ca.degree, "bundle degree (< 0)")->required();
  conv->add_option("--grids", ca.grids, "comma separated, increasing, at least 3")->required();
  conv->add_option("--target", ca.target, "ground | weitzenbock")
      ->check(CLI::IsMember({"ground", "weitzenbock"}));
  conv->add_option("--tol", ca.tol, "eigenpair residual tolerance");

  OracleArgs oa;
  auto* oracle = app.add_subcommand("oracle", "closed-form bounds and spectra");
  oracle->require_subcommand(1);
  std::string formula;
  const std::vector<std::pair<std::string, std::string>> formulas = {
      {"bound-naive", "-pi d / ((n-1)! rk vol)"},
      {"bound-main", "2n/(2n-1) times the naive bound, d < 0"},
      {"bound-dirac-complex", "sqrt(-4 pi d / (rk vol)), d < 0"},
      {"bound-dirac-real", "sqrt(4 pi (1-g)/vol - 4 pi d/(rk vol))"},
      {"sphere-dirac", "sqrt((R/2)((q+1)^2 - (q+1) degL)), q = 0..qmax"},
      {"sphere-dolbeault", "(R/4)((q+1)^2 - (q+1)(1+d)), q = 0..qmax"},
      {"torus-dolbeault", "Landau levels -2 pi d (k+1)/vol, each |d| times"},
      {"dirac-from-dolbeault", "sqrt(2 lambda) of the nonzero --values"},
      {"he-constant", "c = 2 pi d / ((n-1)! rk vol)"},
      {"twist-degree", "d - rk (1 - g)"}};
  for (const auto& [name, about] : formulas) {
    auto* f = oracle->add_subcommand(name, about);
    add_common(f, common);
    f->add_option("--n", oa.n, "complex dimension");
    f->add_option("--degree", oa.degree);
    f->add_option("--rank", oa.rank);
    f->add_option("--genus", oa.genus);
    f->add_option("--vol", oa.vol);
    f->add_option("--R", oa.r);
    f->add_option("--degL", oa.degl);
    f->add_option("--qmax,--kmax", oa.qmax);
    f->add_option("--values", oa.values)->delimiter(',');
    f->callback([&formula, name = name] { formula = name; });
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    err << "run 'twistlap --help' for usage\n";
    return kUsage;
  }

  try {
    bool violation = false;
    Output o;
    if (spectrum->parsed()) {
      o = cmd_spectrum(sa, common);
    } else if (verify->parsed()) {
      o = cmd_verify(va, common, violation);
    } else if (conv->parsed()) {
      o = cmd_convergence(ca, common);
    } else {
      o = cmd_oracle(formula, oa);
    }
    write(o, common, out);
    return violation ? kViolation : kOk;
  } catch (const InvalidParameter& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    err << "error: outside the hypotheses: " << e.what() << '\n';
    return kUsage;
  } catch (const ConvergenceError& e) {
    err << "numerical failure: " << e.what() << " (best residual " << e.best_residual() << ")\n";
    return kNumerical;
  } catch (const StaleEigenpair& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
}

}  // namespace twistlap::cli
