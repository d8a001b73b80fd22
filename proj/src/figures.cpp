#include "egin/figures.hpp"

#include <algorithm>
#include <deque>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "egin/errors.hpp"
#include "egin/finite_n.hpp"
#include "egin/quadrature.hpp"

namespace egin::figures {

namespace A = asymptotics;
using io::Cell;
using io::Table;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const quad::Tolerance kBoxTol{0.0, 1e-9, 400};

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
  return v;
}

double box_integral(const std::function<double(double, double)>& f, double cx, double cy, double hx,
                    double hy) {
  const quad::Result r = quad::integrate_2d(f, cx - hx, cx + hx, cy - hy, cy + hy, kBoxTol, kBoxTol);
  if (!r.converged) throw NumericalError("box average did not converge");
  return r.value;
}

double finite_conditional(const EnsembleSpec& spec, ComplexPoint z) {
  const auto c = finite_n::conditional_mean(spec, z);
  return c ? *c : kNaN;
}

std::string ens(Ensemble e) { return std::string(ensemble_name(e)); }

}  // namespace

spectra::Window scaled_box(A::Regime regime, int n) {
  const double s = std::sqrt(static_cast<double>(n));
  spectra::Window w;
  w.mode = spectra::WindowMode::Box;
  w.hx = 1.0;  // sqrt(N) * (1/sqrt(N)) in every regime
  switch (regime) {
    case A::Regime::SnhBulk: w.hy = 1.0; break;
    case A::Regime::SnhDepletion: w.hy = 1.0 / s; break;
    case A::Regime::WnhBulk: w.hy = kPi / n; break;
  }
  return w;
}

double finite_window_conditional(const EnsembleSpec& spec, ComplexPoint z, double hx, double hy) {
  const auto o = [&](double x, double y) { return finite_n::evaluate(spec, {x, y}).overlap; };
  const auto r = [&](double x, double y) { return finite_n::evaluate(spec, {x, y}).density; };
  const double den = box_integral(r, z.x, z.y, hx, hy);
  if (!(den > 0.0)) return kNaN;
  return box_integral(o, z.x, z.y, hx, hy) / den;
}

double asymptotic_conditional(const A::RegimeQuery& q, int n) {
  const A::RegimeValue v = A::evaluate(q);
  if (!v.inside_support) return kNaN;
  return q.regime == A::Regime::WnhBulk ? v.conditional : n * v.conditional;
}

double asymptotic_window_conditional(const A::RegimeQuery& q, int n, double h) {
  const auto at = [&](double a, double b) {
    A::RegimeQuery p = q;
    p.a = a;
    p.b = b;
    return A::evaluate(p);
  };
  const double den = box_integral([&](double a, double b) { return at(a, b).density; }, q.a, q.b, h, h);
  if (!(den > 0.0)) return kNaN;
  const double num = box_integral([&](double a, double b) { return at(a, b).overlap; }, q.a, q.b, h, h);
  return q.regime == A::Regime::WnhBulk ? num / den : n * num / den;
}

std::uint64_t run_seed(std::uint64_t seed, const std::string& label) {
  std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::uint64_t x = seed ^ h;  // splitmix64 finaliser
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::int64_t default_budget(int id) {
  switch (id) {
    case 1: return 0;
    case 3: return 1000000;
    default: return 10000;
  }
}

int default_n(int id) {
  switch (id) {
    case 1: return 125;
    case 3: return 10;
    default: return 500;
  }
}

std::string published_budget(int id) {
  switch (id) {
    case 1: return "none (finite-N density heatmaps)";
    case 2: return "O(1e8) eigenvalues";
    case 3: return "O(1e9) samples, O(1e3) nearest eigenvalues";
    case 4: return "O(1e8) samples, O(1e3) nearest eigenvalues";
    default: return "O(1e8) samples";
  }
}

namespace {

class Builder {
public:
  Builder(const Options& opt, const io::Metadata& base) : opt_(opt), base_(base) {
    require(opt.id >= 1 && opt.id <= 6, "figure id must be in 1..6");
    require(opt.streams >= 1, "streams must be >= 1");
    require(opt.theory_points >= 2, "theory_points must be >= 2");
    n_ = opt.n.value_or(default_n(opt.id));
    require(n_ >= 2, "N must be >= 2");
    budget_ = opt.budget < 0 ? default_budget(opt.id) : opt.budget;
  }

  std::vector<Table> build() {
    switch (opt_.id) {
      case 1: fig1(); break;
      case 2: fig2(); break;
      case 3: fig3(); break;
      case 4: fig4(); break;
      case 5: fig5(); break;
      case 6: fig6(); break;
    }
    return {std::make_move_iterator(tables_.begin()), std::make_move_iterator(tables_.end())};
  }

private:
  const Options& opt_;
  const io::Metadata& base_;
  int n_ = 2;
  std::int64_t budget_ = 0;
  std::deque<Table> tables_;  // stable addresses while tables are appended

  bool want(Ensemble e) const {
    return opt_.ensembles.empty() ||
           std::find(opt_.ensembles.begin(), opt_.ensembles.end(), e) != opt_.ensembles.end();
  }
  bool want(const std::string& panel) const {
    return opt_.panels.empty() || std::find(opt_.panels.begin(), opt_.panels.end(), panel) != opt_.panels.end();
  }
  std::vector<Ensemble> ensembles() const {
    std::vector<Ensemble> out;
    for (Ensemble e : {Ensemble::RealElliptic, Ensemble::ComplexElliptic})
      if (want(e)) out.push_back(e);
    return out;
  }
  std::vector<double> taus(std::vector<double> fallback) const {
    const std::vector<double>& t = opt_.taus.empty() ? fallback : opt_.taus;
    for (double v : t) require(v >= 0.0 && v < 1.0, "figure taus must lie in [0, 1)");
    return t;
  }

  Table& table(const std::string& name, std::vector<std::string> columns) {
    Table t;
    t.name = name;
    t.metadata = base_;
    t.set_meta("figure", std::to_string(opt_.id));
    t.set_meta("n", std::to_string(n_));
    t.set_meta("published_budget", published_budget(opt_.id));
    t.columns = std::move(columns);
    tables_.push_back(std::move(t));
    return tables_.back();
  }

  spectra::McConfig mc(const EnsembleSpec& spec, const std::string& label) const {
    spectra::McConfig cfg;
    cfg.spec = spec;
    cfg.seed = run_seed(opt_.seed, label);
    cfg.streams = opt_.streams;
    cfg.budget = budget_;
    cfg.threads = opt_.threads;
    cfg.path = opt_.path;
    return cfg;
  }

  static void run_meta(Table& t, const std::string& label, const spectra::McConfig& cfg, std::int64_t samples,
                       std::int64_t discarded) {
    t.set_meta("run." + label,
               "seed=" + std::to_string(cfg.seed) + " budget=" + std::to_string(cfg.budget) +
                   " samples=" + std::to_string(samples) + " discarded=" + std::to_string(discarded));
  }

  /// Runs the estimator unless the budget is zero; returns one estimate per target.
  std::vector<spectra::ConditionalEstimate> estimate(Table& t, const EnsembleSpec& spec,
                                                     const std::string& label,
                                                     const std::vector<ComplexPoint>& targets,
                                                     const spectra::Window& w) const {
    if (budget_ == 0) {
      std::vector<spectra::ConditionalEstimate> none(targets.size());
      for (auto& e : none) {
        e.mean = e.std_error = kNaN;
        e.flagged = true;
      }
      return none;
    }
    const spectra::McConfig cfg = mc(spec, label);
    const spectra::EstimateRun run = spectra::conditional_overlap_estimate(cfg, targets, w);
    run_meta(t, label, cfg, run.samples, run.discarded);
    return run.estimates;
  }

  static void copy_run_meta(const Table& from, Table& to) {
    for (const auto& [k, v] : from.metadata)
      if (k.rfind("run.", 0) == 0) to.set_meta(k, v);
  }

  static std::string window_text(const spectra::Window& w) {
    if (w.mode == spectra::WindowMode::KNearest) return "k-nearest, k=" + std::to_string(w.k);
    return "box |Re z - x| <= " + io::format_double(w.hx) + " and |Im z - y| <= " + io::format_double(w.hy);
  }

  // Figure 1: finite-N density heatmaps, strong (tau) and weak (alpha = 1) regimes.
  void fig1() {
    const double tau = taus({0.25}).front();
    const double alpha = 1.0;
    const int cells = 100;
    const double s = std::sqrt(static_cast<double>(n_));
    struct Panel {
      std::string name;
      double tau, xmax, ymax;
    };
    std::vector<Panel> panels;
    if (want(std::string("snh"))) panels.push_back({"snh", tau, 1.25 * s * (1 + tau), 1.25 * s * (1 - tau)});
    if (want(std::string("wnh"))) {
      const double tw = A::wnh_tau(n_, alpha);
      require(tw >= 0.0, "figure 1: N too small for the weak regime at alpha = 1");
      panels.push_back({"wnh", tw, 2.5 * s, 2.5 * alpha * kPi / s});
    }
    for (const Panel& p : panels) {
      for (Ensemble e : ensembles()) {
        Table& t = table("fig1_" + p.name + "_" + ens(e), {"x", "y", "density"});
        t.set_meta("ensemble", ens(e));
        t.set_meta("tau", io::format_double(p.tau));
        if (p.name == "wnh") t.set_meta("alpha", io::format_double(alpha));
        t.set_meta("grid", "cell centres, 100 x 100");
        std::vector<ComplexPoint> pts;
        for (int j = 0; j < cells; ++j)
          for (int i = 0; i < cells; ++i)
            pts.push_back({-p.xmax + 2 * p.xmax * (i + 0.5) / cells, -p.ymax + 2 * p.ymax * (j + 0.5) / cells});
        const auto vals = finite_n::evaluate_batch({e, n_, p.tau}, pts);
        for (std::size_t i = 0; i < pts.size(); ++i) t.add_row({pts[i].x, pts[i].y, vals[i].density});
      }
    }
  }

  // Figure 2: weak-regime conditional density of complex eigenvalues.
  void fig2() {
    struct Panel {
      std::string name;
      A::Fixed fixed;
      double alpha, fixed_value, lo, hi;
      int bins;
    };
    const std::vector<Panel> all = {{"left", A::Fixed::FixX, 2.0, 0.0, -6.0, 6.0, 48},
                                    {"right", A::Fixed::FixY, 1.0, 1.0, -2.4, 2.4, 48}};
    const double s = std::sqrt(static_cast<double>(n_));
    for (const Panel& p : all) {
      if (!want(p.name)) continue;
      const std::string axis = p.fixed == A::Fixed::FixX ? "y" : "X";
      const double tw = A::wnh_tau(n_, p.alpha);
      require(tw >= 0.0, "figure 2: N too small for the weak regime");

      Table& th = table("fig2_" + p.name + "_theory", {axis});
      th.set_meta("alpha", io::format_double(p.alpha));
      th.set_meta(p.fixed == A::Fixed::FixX ? "X" : "y", io::format_double(p.fixed_value));
      const std::vector<Ensemble> es = ensembles();
      for (Ensemble e : es) th.columns.push_back(ens(e));
      for (double q : linspace(p.lo, p.hi, opt_.theory_points)) {
        std::vector<Cell> row{q};
        for (Ensemble e : es) row.emplace_back(A::wnh_conditional_density(e, p.alpha, p.fixed, p.fixed_value, q));
        th.add_row(std::move(row));
      }

      for (Ensemble e : es) {
        Table& t = table("fig2_" + p.name + "_" + ens(e), {axis, "theory", "mc_density", "mc_se", "count"});
        t.set_meta("ensemble", ens(e));
        t.set_meta("alpha", io::format_double(p.alpha));
        t.set_meta("tau", io::format_double(tw));
        t.set_meta("window", "strip of half-width 1/sqrt(N) in the scaled coordinate held fixed");
        const double w = (p.hi - p.lo) / p.bins;
        spectra::Histogram h;
        if (budget_ > 0) {
          spectra::Grid g;
          if (p.fixed == A::Fixed::FixX) {
            g = {p.fixed_value * s - 1.0, p.fixed_value * s + 1.0, 1, p.lo * kPi / s, p.hi * kPi / s, p.bins};
          } else {
            g = {p.lo * s, p.hi * s, p.bins, kPi / s * (p.fixed_value - 1.0 / s),
                 kPi / s * (p.fixed_value + 1.0 / s), 1};
          }
          const std::string label = "fig2_" + p.name + "_" + ens(e);
          const spectra::McConfig cfg = mc({e, n_, tw}, label);
          h = spectra::density_histogram(cfg, g, e == Ensemble::RealElliptic);
          run_meta(t, label, cfg, h.samples, h.discarded);
        }
        std::uint64_t total = 0;
        for (auto c : h.counts) total += c;
        for (int b = 0; b < p.bins; ++b) {
          const double q = p.lo + (b + 0.5) * w;
          const double theory = A::wnh_conditional_density(e, p.alpha, p.fixed, p.fixed_value, q);
          if (total == 0) {
            t.add_row({q, theory, kNaN, kNaN, std::int64_t{0}});
            continue;
          }
          const std::uint64_t c = p.fixed == A::Fixed::FixX ? h.count(0, b) : h.count(b, 0);
          const double norm = static_cast<double>(total) * w;
          t.add_row({q, theory, c / norm, std::sqrt(static_cast<double>(c)) / norm, static_cast<std::int64_t>(c)});
        }
      }
    }
  }

  // Figure 3: finite N = 10, tau = 0.5, k-nearest estimates.
  void fig3() {
    const double tau = taus({0.5}).front();
    const double s = std::sqrt(static_cast<double>(n_));
    const double y_right = 0.5 * s * (1 - tau);
    spectra::Window w;
    w.mode = spectra::WindowMode::KNearest;
    w.k = opt_.k;
    const std::vector<double> ys = linspace(0.2, 1.6, 8);
    const std::vector<double> xs = linspace(0.0, 3.5, 8);

    const std::vector<Ensemble> es = ensembles();
    const bool left = want(std::string("left")), right = want(std::string("right"));
    for (const auto& [panel, on] : {std::pair{"left", left}, std::pair{"right", right}}) {
      if (!on) continue;
      const bool l = std::string(panel) == "left";
      Table& th = table(std::string("fig3_") + panel + "_theory", {l ? "y" : "x"});
      th.set_meta("tau", io::format_double(tau));
      th.set_meta(l ? "x" : "y", io::format_double(l ? 0.0 : y_right));
      for (Ensemble e : es) th.columns.push_back(ens(e));
      const auto grid = l ? linspace(0.02, 1.6 * s * (1 - tau), opt_.theory_points)
                          : linspace(-1.1 * s * (1 + tau), 1.1 * s * (1 + tau), opt_.theory_points);
      for (double q : grid) {
        std::vector<Cell> row{q};
        for (Ensemble e : es) row.emplace_back(finite_conditional({e, n_, tau}, l ? ComplexPoint{0, q} : ComplexPoint{q, y_right}));
        th.add_row(std::move(row));
      }
    }

    std::vector<ComplexPoint> targets;
    if (left)
      for (double y : ys) targets.push_back({0.0, y});
    if (right)
      for (double x : xs) targets.push_back({x, y_right});
    Table* tl = left ? &table("fig3_left", {"ensemble", "y", "theory", "mc_mean", "mc_se", "count", "radius"}) : nullptr;
    Table* tr = right ? &table("fig3_right", {"ensemble", "x", "theory", "mc_mean", "mc_se", "count", "radius"}) : nullptr;
    for (Table* t : {tl, tr}) {
      if (!t) continue;
      t->set_meta("tau", io::format_double(tau));
      t->set_meta("window", window_text(w));
      t->set_meta("theory", "finite-N conditional mean O/rho at the target");
    }
    for (Ensemble e : es) {
      const EnsembleSpec spec{e, n_, tau};
      const auto est = estimate(tl ? *tl : *tr, spec, "fig3_" + ens(e), targets, w);
      if (tl && tr) copy_run_meta(*tl, *tr);
      for (std::size_t i = 0; i < targets.size(); ++i) {
        const bool is_left = left && i < ys.size();
        Table& t = is_left ? *tl : *tr;
        const double coord = is_left ? targets[i].y : targets[i].x;
        t.add_row({ens(e), coord, finite_conditional(spec, targets[i]), est[i].mean, est[i].std_error,
                   est[i].count, est[i].flagged ? kNaN : est[i].radius});
      }
    }
  }

  // Shared by figures 4 to 6: a box-window Monte Carlo run over one slice set.
  struct Probe {
    std::string panel;
    double coord;
    ComplexPoint z;
    A::RegimeQuery q;
  };

  void conditional_panels(const std::string& fig, const std::string& param_col, double param,
                          const EnsembleSpec& spec, A::Regime regime, const std::vector<Probe>& probes,
                          std::map<std::string, Table*>& out, bool asym_window) {
    const spectra::Window w = scaled_box(regime, n_);
    std::vector<ComplexPoint> targets;
    for (const auto& p : probes) targets.push_back(p.z);
    Table* first = nullptr;
    for (const auto& p : probes) {
      Table*& t = out[p.panel];
      if (!t) {
        t = &table(fig + "_" + p.panel, {param_col, "ensemble", p.panel == "left" ? "slice_left" : "slice_right",
                                          "theory_asymptotic", "theory_window", "theory_finite", "mc_mean",
                                          "mc_se", "count"});
        t->set_meta("window", window_text(w) + " (+-1/sqrt(N) in scaled units)");
        t->set_meta("theory_window", asym_window ? "large-N forms averaged over the window"
                                                 : "finite-N O and rho averaged over the window");
      }
      if (!first) first = t;
    }
    const auto est = estimate(*first, spec, fig + "_" + ens(spec.kind) + "_" + io::format_double(param), targets, w);
    for (auto& [name, t] : out)
      if (t != first) copy_run_meta(*first, *t);
    for (std::size_t i = 0; i < probes.size(); ++i) {
      const Probe& p = probes[i];
      const double window_theory =
          asym_window ? asymptotic_window_conditional(p.q, n_, 1.0 / std::sqrt(static_cast<double>(n_)))
                      : finite_window_conditional(spec, p.z, w.hx, w.hy);
      out[p.panel]->add_row({param, ens(spec.kind), p.coord, asymptotic_conditional(p.q, n_), window_theory,
                             finite_conditional(spec, p.z), est[i].mean, est[i].std_error, est[i].count});
    }
  }

  // Figure 4: strong regime bulk, N = 500.
  void fig4() {
    std::map<std::string, Table*> out;
    for (double tau : taus({0.25, 0.75})) {
      std::vector<Probe> probes;
      const double wy_right = 0.5 * (1 - tau);
      for (Ensemble e : ensembles()) {
        probes.clear();
        if (want(std::string("left")))
          for (double f : linspace(0.1, 0.8, 8)) {
            const double wy = f * (1 - tau);
            probes.push_back({"left", wy, A::snh_bulk_point(n_, 0.0, wy), {A::Regime::SnhBulk, e, tau, 1.0, 0.0, wy}});
          }
        if (want(std::string("right")))
          for (double f : linspace(0.0, 0.7, 8)) {
            const double wx = f * (1 + tau);
            probes.push_back({"right", wx, A::snh_bulk_point(n_, wx, wy_right),
                              {A::Regime::SnhBulk, e, tau, 1.0, wx, wy_right}});
          }
        if (!probes.empty()) conditional_panels("fig4", "tau", tau, {e, n_, tau}, A::Regime::SnhBulk, probes, out, false);
      }
    }
    for (auto& [name, t] : out) {
      t->columns[2] = name == "left" ? "w_y" : "w_x";
      t->set_meta("slice", name == "left" ? "w_x = 0" : "w_y = 0.5 (1 - tau)");
    }
  }

  // Figure 5: eGinOE depletion strip, N = 500.
  void fig5() {
    std::map<std::string, Table*> out;
    if (!want(Ensemble::RealElliptic)) return;
    for (double tau : taus({0.25, 0.5, 0.75})) {
      std::vector<Probe> probes;
      if (want(std::string("left")))
        for (double xi : {0.25, 0.5, 0.75, 1.0, 1.25, 1.5})
          probes.push_back({"left", xi, A::depletion_point(n_, 0.0, xi),
                            {A::Regime::SnhDepletion, Ensemble::RealElliptic, tau, 1.0, 0.0, xi}});
      if (want(std::string("right")))
        for (double d : {0.2, 0.4, 0.6, 0.8, 1.0})
          probes.push_back({"right", d, A::depletion_point(n_, d, 0.5),
                            {A::Regime::SnhDepletion, Ensemble::RealElliptic, tau, 1.0, d, 0.5}});
      if (!probes.empty())
        conditional_panels("fig5", "tau", tau, {Ensemble::RealElliptic, n_, tau}, A::Regime::SnhDepletion, probes,
                           out, true);
    }
    for (auto& [name, t] : out) {
      t->columns[2] = name == "left" ? "xi" : "delta";
      t->set_meta("slice", name == "left" ? "delta = 0" : "xi = 0.5");
    }
  }

  // Figure 6: weak regime, N = 500; left alpha = 2 at X = 0, right alpha = 1 at y = 1.
  void fig6() {
    std::map<std::string, Table*> out;
    for (Ensemble e : ensembles()) {
      if (want(std::string("left"))) {
        std::vector<Probe> probes;
        for (double y : {0.25, 0.5, 0.75, 1.0, 1.5, 2.0})
          probes.push_back({"left", y, A::wnh_point(n_, 0.0, y), {A::Regime::WnhBulk, e, 0.0, 2.0, 0.0, y}});
        conditional_panels("fig6", "alpha", 2.0, {e, n_, A::wnh_tau(n_, 2.0)}, A::Regime::WnhBulk, probes, out, true);
      }
      if (want(std::string("right"))) {
        std::vector<Probe> probes;
        for (double X : {0.0, 0.4, 0.8, 1.2, 1.6})
          probes.push_back({"right", X, A::wnh_point(n_, X, 1.0), {A::Regime::WnhBulk, e, 0.0, 1.0, X, 1.0}});
        conditional_panels("fig6", "alpha", 1.0, {e, n_, A::wnh_tau(n_, 1.0)}, A::Regime::WnhBulk, probes, out, true);
      }
    }
    for (auto& [name, t] : out) {
      t->columns[2] = name == "left" ? "y" : "X";
      t->set_meta("slice", name == "left" ? "X = 0, alpha = 2" : "y = 1, alpha = 1");
    }
  }
};

}  // namespace

std::vector<Table> make(const Options& opt, const io::Metadata& base) { return Builder(opt, base).build(); }

}  // namespace egin::figures
