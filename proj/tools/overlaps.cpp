// overlaps: evaluate, scan, simulate and compare mean eigenvector self-overlaps
// of the elliptic Ginibre ensembles.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "egin/asymptotics.hpp"
#include "egin/errors.hpp"
#include "egin/figures.hpp"
#include "egin/finite_n.hpp"
#include "egin/io.hpp"
#include "egin/kernels.hpp"
#include "egin/parallel.hpp"
#include "egin/spectra.hpp"
#include "egin/validation.hpp"

using namespace egin;
namespace A = egin::asymptotics;

namespace {

struct Args {
  std::string ensemble = "eginue";
  std::optional<int> n;
  std::optional<double> tau;
  std::optional<double> alpha;
  std::string regime = "finite";
  std::vector<std::string> z;
  std::vector<std::string> w;
  std::string grid;
  std::uint64_t seed = 1;
  int streams = 64;
  int threads = 0;
  std::string budget;
  std::string window = "box";
  int k = 1000;
  std::optional<double> h;
  std::optional<double> hy;
  std::string out;
  std::string format = "csv";
  std::string suite = "fast";
  int figure = 0;
  std::string taus;
  std::vector<std::string> panels;
  std::vector<std::string> ensembles;
};

// Canonical command line: every effective setting except --threads and --out,
// which do not change the numbers.
class Command {
public:
  explicit Command(std::string sub) : text_("overlaps " + sub) {}
  void positional(const std::string& v) { text_ += " " + v; }
  void flag(const std::string& name, const std::string& v) { text_ += " --" + name + " " + v; }
  const std::string& str() const { return text_; }

private:
  std::string text_;
};

ComplexPoint parse_point(const std::string& s, const char* what) {
  const auto comma = s.find(',');
  require(comma != std::string::npos, std::string(what) + " must look like \"x,y\": got " + s);
  try {
    std::size_t a = 0, b = 0;
    const double x = std::stod(s.substr(0, comma), &a);
    const double y = std::stod(s.substr(comma + 1), &b);
    require(a == comma && b == s.size() - comma - 1, "");
    return {x, y};
  } catch (const std::exception&) {
    throw DomainError(std::string(what) + " must look like \"x,y\": got " + s);
  }
}

double parse_number(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw DomainError(what + ": not a number: " + s);
}

std::vector<double> parse_list(const std::string& s, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(item, what));
  require(!out.empty(), what + ": empty list");
  return out;
}

std::int64_t parse_budget(const std::string& s) {
  const double v = parse_number(s, "--budget");
  require(v >= 0 && v == std::floor(v) && v < 9.2e18, "--budget must be a non-negative integer (e.g. 1e6)");
  return static_cast<std::int64_t>(v);
}

struct GridSpec {
  double x0, x1;
  int nx;
  double y0, y1;
  int ny;
};

// "x0:x1:nx,y0:y1:ny"
GridSpec parse_grid(const std::string& s) {
  const auto bad = [&] { return DomainError("--grid must look like \"x0:x1:nx,y0:y1:ny\": got " + s); };
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw bad();
  const auto axis = [&](const std::string& a, double& lo, double& hi, int& n) {
    const auto c1 = a.find(':'), c2 = a.rfind(':');
    if (c1 == std::string::npos || c1 == c2) throw bad();
    lo = parse_number(a.substr(0, c1), "--grid");
    hi = parse_number(a.substr(c1 + 1, c2 - c1 - 1), "--grid");
    const double m = parse_number(a.substr(c2 + 1), "--grid");
    require(m >= 1 && m == std::floor(m) && m <= 1e6, "--grid: counts must be integers >= 1");
    require(hi >= lo, "--grid: need lower <= upper");
    n = static_cast<int>(m);
  };
  GridSpec g{};
  axis(s.substr(0, comma), g.x0, g.x1, g.nx);
  axis(s.substr(comma + 1), g.y0, g.y1, g.ny);
  return g;
}

std::vector<double> axis_points(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return v;
}

A::Regime parse_regime(const std::string& s) {
  if (s == "snh-bulk") return A::Regime::SnhBulk;
  if (s == "snh-depletion") return A::Regime::SnhDepletion;
  if (s == "wnh-bulk") return A::Regime::WnhBulk;
  throw DomainError("unknown regime '" + s + "'");
}

io::Metadata base_metadata(const Command& cmd, const Args& a) {
  return {{"program", "overlaps"},
          {"version", EGIN_VERSION},
          {"command", cmd.str()},
          {"seed", std::to_string(a.seed)},
          {"density_normalization",
           "eGinUE density integrates to N; eGinOE complex density integrates to the mean number of complex "
           "eigenvalues"},
          {"conditional", "mean self-overlap given an eigenvalue at z, O(z)/rho(z)"},
          {"window_shape", "box: |Re z - x| <= hx and |Im z - y| <= hy; knearest: k closest eigenvalues"},
          {"kernel_isa", std::string(kernels::isa_name(kernels::active_isa()))}};
}

void emit(const io::Table& t, const Args& a) {
  const io::Format f = io::parse_format(a.format);
  if (a.out.empty()) {
    io::write(std::cout, t, f);
    return;
  }
  std::ofstream os(a.out, std::ios::binary);
  if (!os) throw DomainError("cannot open " + a.out + " for writing");
  io::write(os, t, f);
}

// Matrix ensemble for eval/scan/mc: tau from --tau, or from --alpha in the weak regime.
EnsembleSpec ensemble_spec(const Args& a, Command& cmd) {
  require(a.n.has_value(), "--n is required");
  EnsembleSpec s;
  s.kind = parse_ensemble(a.ensemble);
  s.n = *a.n;
  cmd.flag("ensemble", a.ensemble);
  cmd.flag("n", std::to_string(s.n));
  if (a.tau) {
    s.tau = *a.tau;
    cmd.flag("tau", io::format_double(s.tau));
  } else if (a.alpha) {
    s.tau = A::wnh_tau(s.n, *a.alpha);
    cmd.flag("alpha", io::format_double(*a.alpha));
  } else {
    throw DomainError("--tau (or --alpha) is required");
  }
  s.validate();
  return s;
}

A::RegimeQuery regime_query(const Args& a, Command& cmd) {
  A::RegimeQuery q;
  q.regime = parse_regime(a.regime);
  q.ensemble = parse_ensemble(a.ensemble);
  cmd.flag("regime", a.regime);
  cmd.flag("ensemble", a.ensemble);
  if (q.regime == A::Regime::WnhBulk) {
    require(a.alpha.has_value(), "--alpha is required for the weak regime");
    q.alpha = *a.alpha;
    cmd.flag("alpha", io::format_double(q.alpha));
  } else {
    require(a.tau.has_value(), "--tau is required for the strong regimes");
    q.tau = *a.tau;
    cmd.flag("tau", io::format_double(q.tau));
  }
  if (a.n) cmd.flag("n", std::to_string(*a.n));
  return q;
}

std::vector<std::string> regime_columns(A::Regime r) {
  switch (r) {
    case A::Regime::SnhBulk: return {"w_x", "w_y"};
    case A::Regime::SnhDepletion: return {"delta", "xi"};
    case A::Regime::WnhBulk: return {"X", "y"};
  }
  return {};
}

io::Table regime_table(const A::RegimeQuery& q, const Args& a, const std::vector<ComplexPoint>& pts,
                       const Command& cmd) {
  io::Table t;
  t.name = "eval";
  t.metadata = base_metadata(cmd, a);
  t.set_meta("scaling", q.regime == A::Regime::WnhBulk ? "overlap = pi^2 O_N / N, density = pi^2 rho_N / N"
                                                       : "overlap = O_N / N, density = rho_N");
  t.columns = regime_columns(q.regime);
  for (const char* c : {"density", "overlap", "conditional"}) t.columns.push_back(c);
  if (a.n) t.columns.push_back("conditional_n");
  for (const ComplexPoint& p : pts) {
    A::RegimeQuery r = q;
    r.a = p.x;
    r.b = p.y;
    const A::RegimeValue v = A::evaluate(r);
    std::vector<io::Cell> row{p.x, p.y, v.density, v.overlap, v.conditional};
    if (a.n) row.emplace_back(figures::asymptotic_conditional(r, *a.n));
    t.add_row(std::move(row));
  }
  return t;
}

io::Table finite_table(const EnsembleSpec& spec, const Args& a, const std::vector<ComplexPoint>& pts,
                       const Command& cmd) {
  io::Table t;
  t.name = "eval";
  t.metadata = base_metadata(cmd, a);
  t.columns = {"x", "y", "density", "overlap", "conditional"};
  const std::vector<finite_n::FiniteNResult> vals =
      pts.size() > 8 ? finite_n::evaluate_batch(spec, pts) : [&] {
        std::vector<finite_n::FiniteNResult> v;
        for (const auto& p : pts) v.push_back(finite_n::evaluate(spec, p));
        return v;
      }();
  for (std::size_t i = 0; i < pts.size(); ++i)
    t.add_row({pts[i].x, pts[i].y, vals[i].density, vals[i].overlap,
               vals[i].conditional ? *vals[i].conditional : std::nan("")});
  if (std::any_of(vals.begin(), vals.end(), [](const auto& v) { return v.density_underflow(); }))
    t.set_meta("underflow", "conditional is nan where the density is below 1e-300");
  return t;
}

std::vector<ComplexPoint> points_from(const std::vector<std::string>& raw, const char* what, Command& cmd) {
  std::vector<ComplexPoint> pts;
  for (const auto& s : raw) {
    pts.push_back(parse_point(s, what));
    cmd.flag(std::string(what).substr(2), s);
  }
  return pts;
}

int cmd_eval(const Args& a) {
  Command cmd("eval");
  if (a.regime != "finite") {
    const A::RegimeQuery q = regime_query(a, cmd);
    const auto& raw = a.w.empty() ? a.z : a.w;
    require(!raw.empty(), "give at least one point with --w \"a,b\"");
    const auto pts = points_from(raw, a.w.empty() ? "--z" : "--w", cmd);
    cmd.flag("format", a.format);
    emit(regime_table(q, a, pts, cmd), a);
    return 0;
  }
  const EnsembleSpec spec = ensemble_spec(a, cmd);
  require(!a.z.empty(), "give at least one point with --z \"x,y\"");
  const auto pts = points_from(a.z, "--z", cmd);
  cmd.flag("format", a.format);
  emit(finite_table(spec, a, pts, cmd), a);
  return 0;
}

int cmd_scan(const Args& a) {
  Command cmd("scan");
  require(!a.grid.empty(), "--grid is required");
  const GridSpec g = parse_grid(a.grid);
  std::vector<ComplexPoint> pts;
  for (double y : axis_points(g.y0, g.y1, g.ny))
    for (double x : axis_points(g.x0, g.x1, g.nx)) pts.push_back({x, y});
  if (a.regime != "finite") {
    const A::RegimeQuery q = regime_query(a, cmd);
    cmd.flag("grid", a.grid);
    cmd.flag("format", a.format);
    io::Table t = regime_table(q, a, pts, cmd);
    t.name = "scan";
    emit(t, a);
    return 0;
  }
  const EnsembleSpec spec = ensemble_spec(a, cmd);
  cmd.flag("grid", a.grid);
  cmd.flag("format", a.format);
  if (spec.kind == Ensemble::RealElliptic)
    for (const auto& p : pts) require(p.y != 0.0, "eGinOE complex density needs y != 0; choose a grid that avoids y = 0");
  io::Table t = finite_table(spec, a, pts, cmd);
  t.name = "scan";
  emit(t, a);
  return 0;
}

int cmd_mc(const Args& a) {
  Command cmd("mc");
  spectra::McConfig cfg;
  cfg.spec = ensemble_spec(a, cmd);
  cfg.seed = a.seed;
  cfg.streams = a.streams;
  cfg.threads = a.threads;
  require(!a.budget.empty(), "--budget is required");
  cfg.budget = parse_budget(a.budget);
  cmd.flag("seed", std::to_string(a.seed));
  cmd.flag("streams", std::to_string(a.streams));
  cmd.flag("budget", std::to_string(cfg.budget));

  if (!a.grid.empty()) {
    const GridSpec g = parse_grid(a.grid);
    cmd.flag("grid", a.grid);
    cmd.flag("format", a.format);
    const spectra::Grid grid{g.x0, g.x1, g.nx, g.y0, g.y1, g.ny};
    const spectra::Histogram h = spectra::density_histogram(cfg, grid);
    io::Table t;
    t.name = "histogram";
    t.metadata = base_metadata(cmd, a);
    t.set_meta("samples", std::to_string(h.samples));
    t.set_meta("discarded", std::to_string(h.discarded));
    t.set_meta("outside", std::to_string(h.outside));
    t.set_meta("normalization", "density = count / ((samples - discarded) * bin area)");
    t.columns = {"x", "y", "count", "density"};
    const double dx = (g.x1 - g.x0) / g.nx, dy = (g.y1 - g.y0) / g.ny;
    for (int iy = 0; iy < g.ny; ++iy)
      for (int ix = 0; ix < g.nx; ++ix)
        t.add_row({g.x0 + (ix + 0.5) * dx, g.y0 + (iy + 0.5) * dy, static_cast<std::int64_t>(h.count(ix, iy)),
                   h.normalized(ix, iy)});
    emit(t, a);
    return 0;
  }

  require(!a.z.empty(), "give targets with --z \"x,y\" (or a --grid for a histogram)");
  const auto targets = points_from(a.z, "--z", cmd);
  spectra::Window w;
  if (a.window == "box") {
    w.mode = spectra::WindowMode::Box;
    w.hx = a.h.value_or(1.0 / std::sqrt(static_cast<double>(cfg.spec.n)));
    w.hy = a.hy.value_or(w.hx);
    cmd.flag("window", "box");
    cmd.flag("hx", io::format_double(w.hx));
    cmd.flag("hy", io::format_double(w.hy));
  } else if (a.window == "knearest") {
    w.mode = spectra::WindowMode::KNearest;
    w.k = a.k;
    cmd.flag("window", "knearest");
    cmd.flag("k", std::to_string(w.k));
  } else {
    throw DomainError("--window must be box or knearest");
  }
  cmd.flag("format", a.format);
  const spectra::EstimateRun run = spectra::conditional_overlap_estimate(cfg, targets, w);
  io::Table t;
  t.name = "mc";
  t.metadata = base_metadata(cmd, a);
  t.set_meta("samples", std::to_string(run.samples));
  t.set_meta("discarded", std::to_string(run.discarded));
  t.columns = {"x", "y", "mc_mean", "mc_se", "count", "radius", "flagged", "theory_finite"};
  for (const auto& e : run.estimates) {
    const auto th = finite_n::conditional_mean(cfg.spec, e.target);
    t.add_row({e.target.x, e.target.y, e.flagged ? std::nan("") : e.mean, e.flagged ? std::nan("") : e.std_error,
               e.count, e.radius, static_cast<std::int64_t>(e.flagged), th ? *th : std::nan("")});
  }
  emit(t, a);
  return 0;
}

int cmd_compare(const Args& a) {
  Command cmd("compare");
  cmd.flag("suite", a.suite);
  cmd.flag("seed", std::to_string(a.seed));
  cmd.flag("streams", std::to_string(a.streams));
  std::vector<std::string> suites;
  if (a.suite == "all") {
    suites = validation::suite_names();
  } else if (a.suite == "fast") {
    suites = {"snh-constants", "tau-zero", "dual-path", "integral", "regimes"};
  } else {
    std::stringstream ss(a.suite);
    std::string s;
    while (std::getline(ss, s, ',')) suites.push_back(s);
  }
  validation::McOptions opt{a.seed, a.threads, a.streams};
  nlohmann::ordered_json report;
  report["metadata"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : base_metadata(cmd, a)) report["metadata"][k] = v;
  report["suites"] = nlohmann::ordered_json::array();
  bool all_ok = true;
  for (const auto& name : suites) {
    const validation::SuiteReport r = validation::run_suite(name, opt);
    nlohmann::ordered_json js;
    js["suite"] = r.suite;
    js["passed"] = r.passed();
    js["seconds"] = r.seconds;
    js["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : r.checks) {
      nlohmann::ordered_json jc;
      jc["criterion"] = c.criterion;
      jc["name"] = c.name;
      jc["passed"] = c.passed;
      jc["measured"] = std::isfinite(c.measured) ? nlohmann::ordered_json(c.measured) : nlohmann::ordered_json(io::format_double(c.measured));
      jc["tolerance"] = c.tolerance;
      jc["detail"] = c.detail;
      js["checks"].push_back(jc);
    }
    all_ok = all_ok && r.passed();
    report["suites"].push_back(js);
    std::cerr << (r.passed() ? "PASS " : "FAIL ") << name << " (" << r.seconds << " s)\n";
  }
  report["passed"] = all_ok;
  const std::string text = report.dump(1) + "\n";
  if (a.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream os(a.out, std::ios::binary);
    if (!os) throw DomainError("cannot open " + a.out + " for writing");
    os << text;
  }
  return 0;
}

int cmd_figure(const Args& a) {
  Command cmd("figure");
  require(a.figure >= 1 && a.figure <= 6, "figure id must be in 1..6");
  cmd.positional(std::to_string(a.figure));
  figures::Options fo;
  fo.id = a.figure;
  fo.seed = a.seed;
  fo.streams = a.streams;
  fo.threads = a.threads;
  fo.k = a.k;
  fo.n = a.n;
  fo.budget = a.budget.empty() ? figures::default_budget(a.figure) : parse_budget(a.budget);
  if (!a.taus.empty()) fo.taus = parse_list(a.taus, "--tau");
  for (const auto& e : a.ensembles) fo.ensembles.push_back(parse_ensemble(e));
  fo.panels = a.panels;
  cmd.flag("budget", std::to_string(fo.budget));
  cmd.flag("seed", std::to_string(fo.seed));
  cmd.flag("streams", std::to_string(fo.streams));
  cmd.flag("k", std::to_string(fo.k));
  if (fo.n) cmd.flag("n", std::to_string(*fo.n));
  if (!a.taus.empty()) cmd.flag("tau", a.taus);
  for (const auto& e : a.ensembles) cmd.flag("ensemble", e);
  for (const auto& p : a.panels) cmd.flag("panel", p);
  cmd.flag("format", a.format);
  const io::Format f = io::parse_format(a.format);
  for (io::Table& t : figures::make(fo, base_metadata(cmd, a))) {
    t.set_meta("default_budget", std::to_string(figures::default_budget(a.figure)));
    std::cout << io::save(t, a.out.empty() ? "." : a.out, f) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mean eigenvector self-overlaps of the elliptic Ginibre ensembles"};
  app.set_version_flag("--version", EGIN_VERSION);
  app.require_subcommand(1);
  Args a;

  const auto common = [&](CLI::App* s) {
    s->add_option("--ensemble", a.ensemble, "eginue | eginoe")->check(CLI::IsMember({"eginue", "eginoe"}));
    s->add_option("--n", a.n, "matrix size N");
    s->add_option("--tau", a.tau, "ellipticity tau in [0, 1]");
    s->add_option("--alpha", a.alpha, "weak non-Hermiticity: tau = 1 - (pi alpha)^2 / (2N)");
    s->add_option("--out", a.out, "output file (default: stdout)");
    s->add_option("--format", a.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  };
  const auto mc_opts = [&](CLI::App* s) {
    s->add_option("--seed", a.seed, "base seed");
    s->add_option("--streams", a.streams, "independent random streams (fixes the work split)");
    s->add_option("--threads", a.threads, "worker threads (default: OVERLAPS_THREADS, then all cores)");
    s->add_option("--budget", a.budget, "number of matrices, e.g. 1e6");
  };

  auto* eval = app.add_subcommand("eval", "density, overlap and conditional mean at points");
  common(eval);
  eval->add_option("--regime", a.regime, "finite | snh-bulk | snh-depletion | wnh-bulk")
      ->check(CLI::IsMember({"finite", "snh-bulk", "snh-depletion", "wnh-bulk"}));
  eval->add_option("--z", a.z, "point \"x,y\" (repeatable)");
  eval->add_option("--w", a.w, "scaled point \"a,b\" for the large-N regimes (repeatable)");

  auto* scan = app.add_subcommand("scan", "evaluate over a rectangular grid");
  common(scan);
  scan->add_option("--regime", a.regime)->check(CLI::IsMember({"finite", "snh-bulk", "snh-depletion", "wnh-bulk"}));
  scan->add_option("--grid", a.grid, "\"x0:x1:nx,y0:y1:ny\" (endpoints included)");

  auto* mc = app.add_subcommand("mc", "Monte Carlo conditional overlaps or eigenvalue histogram");
  common(mc);
  mc_opts(mc);
  mc->add_option("--z", a.z, "target \"x,y\" (repeatable)");
  mc->add_option("--grid", a.grid, "histogram bins \"x0:x1:nx,y0:y1:ny\"");
  mc->add_option("--window", a.window, "box | knearest")->check(CLI::IsMember({"box", "knearest"}));
  mc->add_option("--k", a.k, "k for the k-nearest window")->check(CLI::PositiveNumber);
  mc->add_option("--hx", a.h, "box half-width along Re z (default 1/sqrt(N))")->check(CLI::PositiveNumber);
  mc->add_option("--hy", a.hy, "box half-width along Im z (default: --hx)")->check(CLI::PositiveNumber);

  auto* cmp = app.add_subcommand("compare", "run validation suites and emit a JSON report");
  cmp->add_option("--suite", a.suite, "tau-zero | dual-path | regimes | ... | fast | all (comma-separated)");
  cmp->add_option("--seed", a.seed);
  cmp->add_option("--streams", a.streams);
  cmp->add_option("--threads", a.threads);
  cmp->add_option("--out", a.out);

  auto* fig = app.add_subcommand("figure", "write the data behind figure 1..6");
  fig->add_option("id", a.figure, "figure number")->required();
  mc_opts(fig);
  fig->add_option("--n", a.n, "override the matrix size");
  fig->add_option("--tau", a.taus, "comma-separated tau list (figures 1, 3, 4, 5)");
  fig->add_option("--k", a.k, "k for k-nearest windows")->check(CLI::PositiveNumber);
  fig->add_option("--ensemble", a.ensembles, "restrict to eginue or eginoe (repeatable)");
  fig->add_option("--panel", a.panels, "restrict to a panel: left, right (snh, wnh for figure 1)");
  fig->add_option("--out", a.out, "output directory (default: .)");
  fig->add_option("--format", a.format)->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*eval) return cmd_eval(a);
    if (*scan) return cmd_scan(a);
    if (*mc) return cmd_mc(a);
    if (*cmp) return cmd_compare(a);
    if (*fig) return cmd_figure(a);
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  }
  return 2;
}
