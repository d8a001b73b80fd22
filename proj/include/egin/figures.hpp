#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "egin/asymptotics.hpp"
#include "egin/ensemble.hpp"
#include "egin/io.hpp"
#include "egin/spectra.hpp"

// Data behind each figure: theory curves plus Monte Carlo points with
// standard errors, as tables ready for io::save.

namespace egin::figures {

// --- theory helpers shared with the validation suites ----------------------

/// Box half-widths in z units for a +-1/sqrt(N) window in the regime's own
/// scaled coordinates (bulk: w; depletion: delta and xi; weak: X and y).
spectra::Window scaled_box(asymptotics::Regime regime, int n);

/// int_box O / int_box rho for the finite-N formulas: the quantity a box-window
/// estimator converges to. Box centred at z with half-widths hx, hy.
double finite_window_conditional(const EnsembleSpec& spec, ComplexPoint z, double hx, double hy);

/// The same ratio for the large-N forms over a box of half-width h in the
/// regime's scaled coordinates, returned as the unscaled conditional mean
/// (times N in the strong regimes).
double asymptotic_window_conditional(const asymptotics::RegimeQuery& q, int n, double h);

/// Unscaled conditional mean predicted by the large-N forms at one point.
double asymptotic_conditional(const asymptotics::RegimeQuery& q, int n);

/// Seed of an individual Monte Carlo run, derived from the user seed and a
/// stable run label so that runs inside one figure use unrelated streams.
std::uint64_t run_seed(std::uint64_t seed, const std::string& label);

// --- figure protocols --------------------------------------------------------

struct Options {
  int id = 1;
  std::int64_t budget = -1;           // matrices per Monte Carlo run; -1: default, 0: theory only
  std::uint64_t seed = 1;
  int streams = 64;
  int threads = 0;
  std::optional<int> n;               // override the matrix size
  std::vector<double> taus;           // override the tau list (figures 1, 3, 4, 5)
  int k = 1000;                       // k-nearest size (figure 3)
  int theory_points = 121;
  std::vector<Ensemble> ensembles;    // empty: both
  std::vector<std::string> panels;    // empty: all ("left", "right")
  spectra::Path path = spectra::Path::Auto;
};

/// Default matrices per run: 1e6 at N <= 10, 1e4 at N = 500, theory only for figure 1.
std::int64_t default_budget(int id);
int default_n(int id);
/// The sample sizes behind the published figures, for the metadata.
std::string published_budget(int id);

/// All tables of figure `id`. `base` is copied into every table's metadata.
std::vector<io::Table> make(const Options& opt, const io::Metadata& base);

}  // namespace egin::figures
