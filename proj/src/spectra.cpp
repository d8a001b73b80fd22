#include "egin/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <tuple>

#include "egin/errors.hpp"
#include "egin/kernels.hpp"
#include "egin/linalg.hpp"
#include "egin/parallel.hpp"

namespace egin::spectra {

namespace {

using cd = std::complex<double>;

std::vector<int> lexicographic_order(const std::vector<cd>& w) {
  std::vector<int> order(w.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return w[a].real() < w[b].real() || (w[a].real() == w[b].real() && w[a].imag() < w[b].imag());
  });
  return order;
}

// Row norms of a column-major matrix via the column kernel on its transpose.
std::vector<double> row_norms2(const Eigen::MatrixXcd& a) {
  const Eigen::MatrixXcd t = a.transpose();
  std::vector<double> out(t.cols());
  kernels::column_norms2(reinterpret_cast<const double*>(t.data()), t.rows(), t.cols(), t.rows(),
                         out.data());
  return out;
}

std::vector<double> col_norms2(const Eigen::MatrixXcd& a) {
  std::vector<double> out(a.cols());
  kernels::column_norms2(reinterpret_cast<const double*>(a.data()), a.rows(), a.cols(), a.rows(),
                         out.data());
  return out;
}

Decomposition decompose_impl(const Eigen::MatrixXcd& xc, const linalg::Eigensystem& es) {
  const Eigen::Index n = xc.rows();
  const std::vector<int> order = lexicographic_order(es.values);
  Decomposition d;
  d.right.resize(n, n);
  d.spectrum.eigenvalues.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    d.right.col(j) = es.right.col(order[j]);
    d.spectrum.eigenvalues[j] = es.values[order[j]];
  }
  d.left = linalg::inverse(d.right);

  const std::vector<double> r2 = col_norms2(d.right);
  const std::vector<double> l2 = row_norms2(d.left);
  d.spectrum.overlaps.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) d.spectrum.overlaps[j] = l2[j] * r2[j];

  Eigen::MatrixXcd resid = xc * d.right;
  for (Eigen::Index j = 0; j < n; ++j) resid.col(j) -= d.spectrum.eigenvalues[j] * d.right.col(j);
  const std::vector<double> e2 = col_norms2(resid);
  const double xnorm = xc.norm();
  double worst = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) worst = std::max(worst, std::sqrt(e2[j] / r2[j]));
  d.spectrum.residual_max = xnorm > 0.0 ? worst / xnorm : worst;
  if (!(d.spectrum.residual_max <= kDiscardResidual))
    throw NumericalError("eigenvector residual above the discard threshold");
  return d;
}

// Hessenberg form and its eigenvalues, kept in solver order.
struct HessenbergSpectrum {
  Eigen::MatrixXcd h;
  std::vector<cd> w;
  std::vector<int> order;  // lexicographic permutation of w
};

HessenbergSpectrum hessenberg_spectrum(const sampling::MatrixSample& m) {
  HessenbergSpectrum s;
  if (m.is_real()) {
    const Eigen::MatrixXd h = linalg::hessenberg(m.real);
    s.w = linalg::hessenberg_eigenvalues(h);
    s.h = h.cast<cd>();
  } else {
    s.h = linalg::hessenberg(m.complex);
    s.w = linalg::hessenberg_eigenvalues(s.h);
  }
  s.order = lexicographic_order(s.w);
  return s;
}

// Overlaps for the eigenvalues at sorted positions `selected`.
void overlaps_for(const HessenbergSpectrum& s, const std::vector<int>& selected,
                  std::vector<double>& overlaps, double& residual_max) {
  overlaps.clear();
  residual_max = 0.0;
  if (selected.empty()) return;
  const Eigen::Index n = s.h.rows();
  std::vector<int> flag(n, 0);
  for (int i : selected) flag[s.order[i]] = 1;
  const linalg::SelectedVectors v = linalg::hessenberg_vectors(s.h, s.w, flag);
  if (!v.failed.empty()) throw NumericalError("inverse iteration did not converge");

  // hsein returns vectors in increasing solver index; map back to sorted positions.
  std::vector<int> column_of(n, -1);
  int c = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (flag[i]) column_of[i] = c++;

  const double hnorm = s.h.norm();
  overlaps.resize(selected.size());
  for (std::size_t k = 0; k < selected.size(); ++k) {
    const int col = column_of[s.order[selected[k]]];
    const auto l = v.left.col(col);
    const auto r = v.right.col(col);
    const cd lam = v.values[col];
    const double ln = l.squaredNorm(), rn = r.squaredNorm();
    const double dot = std::norm(l.dot(r));
    if (!(dot > 0.0)) throw NumericalError("left and right eigenvectors are orthogonal");
    overlaps[k] = ln * rn / dot;
    const double er = (s.h * r - lam * r).norm() / std::sqrt(rn);
    const double el = (s.h.adjoint() * l - std::conj(lam) * l).norm() / std::sqrt(ln);
    residual_max = std::max({residual_max, er / hnorm, el / hnorm});
  }
  if (!(residual_max <= kDiscardResidual))
    throw NumericalError("eigenvector residual above the discard threshold");
}

}  // namespace

// --- decomposition ---------------------------------------------------------

Decomposition decompose_with_vectors(const Eigen::MatrixXcd& x) {
  require(x.rows() == x.cols() && x.rows() >= 1, "decompose: matrix must be square");
  return decompose_impl(x, linalg::eig(x));
}

Decomposition decompose_with_vectors(const sampling::MatrixSample& m) {
  if (m.is_real()) return decompose_impl(m.real.cast<cd>(), linalg::eig(m.real));
  return decompose_with_vectors(m.complex);
}

SpectralSample decompose(const sampling::MatrixSample& m) { return decompose_with_vectors(m).spectrum; }

double biorthogonality_residual(const Decomposition& d) {
  Eigen::MatrixXcd e = d.left * d.right;
  e -= Eigen::MatrixXcd::Identity(e.rows(), e.cols());
  return e.cwiseAbs().maxCoeff();
}

std::vector<cd> sorted_eigenvalues(const sampling::MatrixSample& m) {
  const std::vector<cd> w = m.is_real() ? linalg::eigenvalues(m.real) : linalg::eigenvalues(m.complex);
  const std::vector<int> order = lexicographic_order(w);
  std::vector<cd> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = w[order[i]];
  return out;
}

SelectedOverlaps selected_overlaps(const sampling::MatrixSample& m,
                                   const std::function<bool(cd)>& select) {
  const HessenbergSpectrum s = hessenberg_spectrum(m);
  SelectedOverlaps out;
  out.eigenvalues.resize(s.w.size());
  for (std::size_t i = 0; i < s.w.size(); ++i) {
    out.eigenvalues[i] = s.w[s.order[i]];
    if (select(out.eigenvalues[i])) out.selected.push_back(static_cast<int>(i));
  }
  overlaps_for(s, out.selected, out.overlaps, out.residual_max);
  return out;
}

// --- running statistics ----------------------------------------------------

void RunningStats::add(double x) {
  ++count;
  const double d = x - mean;
  mean += d / static_cast<double>(count);
  m2 += d * (x - mean);
}

RunningStats RunningStats::merge(const RunningStats& a, const RunningStats& b) {
  if (a.count == 0) return b;
  if (b.count == 0) return a;
  RunningStats r;
  r.count = a.count + b.count;
  const double na = static_cast<double>(a.count), nb = static_cast<double>(b.count);
  const double d = b.mean - a.mean;
  r.mean = a.mean + d * nb / static_cast<double>(r.count);
  r.m2 = a.m2 + b.m2 + d * d * na * nb / static_cast<double>(r.count);
  return r;
}

double RunningStats::std_error() const {
  return count > 1 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0;
}

// --- Monte Carlo -------------------------------------------------------------

void McConfig::validate() const {
  spec.validate();
  require(budget >= 1, "budget must be >= 1");
  require(streams >= 1, "streams must be >= 1");
}

namespace {

std::int64_t samples_in_stream(const McConfig& cfg, int stream) {
  const std::int64_t base = cfg.budget / cfg.streams, extra = cfg.budget % cfg.streams;
  return base + (stream < extra ? 1 : 0);
}

struct Candidate {
  double d2;
  std::int64_t stream;
  std::int64_t sample;
  int index;
  double overlap;

  auto key() const { return std::tie(d2, stream, sample, index); }
  bool operator<(const Candidate& o) const { return key() < o.key(); }
};

struct TaskResult {
  std::vector<RunningStats> box;
  std::vector<std::vector<Candidate>> nearest;
  std::int64_t samples = 0;
  std::int64_t discarded = 0;
};

bool use_selected_path(const McConfig& cfg, const Window& w) {
  if (w.mode == WindowMode::KNearest) return false;
  switch (cfg.path) {
    case Path::Full: return false;
    case Path::Selected: return true;
    case Path::Auto: return cfg.spec.n >= 64;
  }
  return false;
}

}  // namespace

EstimateRun conditional_overlap_estimate(const McConfig& cfg, const std::vector<ComplexPoint>& targets,
                                         const Window& window) {
  cfg.validate();
  require(!targets.empty(), "conditional_overlap_estimate: no targets");
  for (const auto& t : targets) {
    require(std::isfinite(t.x) && std::isfinite(t.y), "targets must be finite");
    if (cfg.spec.kind == Ensemble::RealElliptic)
      require(t.y != 0.0, "eGinOE conditional estimates need targets with y != 0");
  }
  if (window.mode == WindowMode::Box)
    require(window.hx > 0.0 && window.hy > 0.0, "box window half-widths must be > 0");
  else
    require(window.k >= 1, "k-nearest window needs k >= 1");

  const bool selected_path = use_selected_path(cfg, window);
  const std::size_t nt = targets.size();
  std::vector<TaskResult> results(cfg.streams);

  parallel::run_tasks(cfg.streams, parallel::resolve_threads(cfg.threads), [&](std::size_t task) {
    TaskResult& out = results[task];
    out.box.assign(nt, {});
    std::vector<std::priority_queue<Candidate>> heaps(nt);
    sampling::GaussianStream g({cfg.seed, static_cast<std::uint64_t>(task)});
    const std::int64_t count = samples_in_stream(cfg, static_cast<int>(task));
    const std::size_t n = static_cast<std::size_t>(cfg.spec.n);
    std::vector<double> re(n), im(n);
    std::vector<unsigned char> hit(n), any(n);

    for (std::int64_t s = 0; s < count; ++s) {
      const sampling::MatrixSample m = sampling::sample(cfg.spec, g);
      ++out.samples;
      try {
        if (window.mode == WindowMode::KNearest) {
          const SpectralSample sp = decompose(m);
          for (std::size_t t = 0; t < nt; ++t) {
            for (std::size_t i = 0; i < n; ++i) {
              const double dx = sp.eigenvalues[i].real() - targets[t].x;
              const double dy = sp.eigenvalues[i].imag() - targets[t].y;
              const Candidate c{dx * dx + dy * dy, static_cast<std::int64_t>(task), s,
                                static_cast<int>(i), sp.overlaps[i]};
              auto& h = heaps[t];
              if (static_cast<int>(h.size()) < window.k) {
                h.push(c);
              } else if (c < h.top()) {
                h.pop();
                h.push(c);
              }
            }
          }
          continue;
        }

        std::vector<cd> ev;
        std::vector<double> ov;
        std::vector<int> pos_of(n, -1);
        HessenbergSpectrum hs;
        if (selected_path) {
          hs = hessenberg_spectrum(m);
          ev.resize(n);
          for (std::size_t i = 0; i < n; ++i) ev[i] = hs.w[hs.order[i]];
        } else {
          SpectralSample sp = decompose(m);
          ev = std::move(sp.eigenvalues);
          ov = std::move(sp.overlaps);
        }
        for (std::size_t i = 0; i < n; ++i) {
          re[i] = ev[i].real();
          im[i] = ev[i].imag();
        }
        // Masks per target; the selected path needs the union first.
        std::vector<std::vector<unsigned char>> masks(nt, std::vector<unsigned char>(n));
        std::fill(any.begin(), any.end(), 0);
        for (std::size_t t = 0; t < nt; ++t) {
          kernels::box_hits(re.data(), im.data(), n, targets[t].x, targets[t].y, window.hx, window.hy,
                            masks[t].data());
          for (std::size_t i = 0; i < n; ++i) any[i] |= masks[t][i];
        }
        if (selected_path) {
          std::vector<int> sel;
          for (std::size_t i = 0; i < n; ++i)
            if (any[i]) {
              pos_of[i] = static_cast<int>(sel.size());
              sel.push_back(static_cast<int>(i));
            }
          std::vector<double> sov;
          double resid = 0.0;
          overlaps_for(hs, sel, sov, resid);
          ov.assign(n, 0.0);
          for (std::size_t i = 0; i < n; ++i)
            if (pos_of[i] >= 0) ov[i] = sov[pos_of[i]];
        }
        for (std::size_t t = 0; t < nt; ++t)
          for (std::size_t i = 0; i < n; ++i)
            if (masks[t][i]) out.box[t].add(ov[i]);
      } catch (const NumericalError&) {
        ++out.discarded;
      }
    }
    if (window.mode == WindowMode::KNearest) {
      out.nearest.resize(nt);
      for (std::size_t t = 0; t < nt; ++t) {
        auto& h = heaps[t];
        while (!h.empty()) {
          out.nearest[t].push_back(h.top());
          h.pop();
        }
      }
    }
  });

  EstimateRun run;
  for (const auto& r : results) {
    run.samples += r.samples;
    run.discarded += r.discarded;
  }
  run.estimates.resize(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    ConditionalEstimate& e = run.estimates[t];
    e.target = targets[t];
    e.window = window;
    RunningStats stats;
    if (window.mode == WindowMode::Box) {
      std::vector<RunningStats> parts;
      parts.reserve(results.size());
      for (const auto& r : results) parts.push_back(r.box[t]);
      stats = parallel::pairwise_reduce(std::move(parts), RunningStats::merge);
    } else {
      std::vector<Candidate> all;
      for (const auto& r : results) all.insert(all.end(), r.nearest[t].begin(), r.nearest[t].end());
      std::sort(all.begin(), all.end());
      if (static_cast<int>(all.size()) > window.k) all.resize(window.k);
      for (const auto& c : all) stats.add(c.overlap);
      e.radius = all.empty() ? 0.0 : std::sqrt(all.back().d2);
    }
    e.count = stats.count;
    e.mean = stats.mean;
    e.std_error = stats.std_error();
    e.flagged = stats.count == 0;
  }
  return run;
}

void Grid::validate() const {
  require(nx >= 1 && ny >= 1, "grid: need at least one bin per axis");
  require(std::isfinite(x0) && std::isfinite(x1) && x1 > x0, "grid: need finite x0 < x1");
  require(std::isfinite(y0) && std::isfinite(y1) && y1 > y0, "grid: need finite y0 < y1");
}

double Histogram::normalized(int ix, int iy) const {
  return samples > discarded
             ? static_cast<double>(count(ix, iy)) / (static_cast<double>(samples - discarded) * grid.bin_area())
             : 0.0;
}

Histogram density_histogram(const McConfig& cfg, const Grid& grid, bool complex_only) {
  cfg.validate();
  grid.validate();
  struct Part {
    std::vector<std::uint64_t> counts;
    std::uint64_t outside = 0, real = 0;
    std::int64_t samples = 0, discarded = 0;
  };
  std::vector<Part> parts(cfg.streams);
  const double dx = (grid.x1 - grid.x0) / grid.nx, dy = (grid.y1 - grid.y0) / grid.ny;

  parallel::run_tasks(cfg.streams, parallel::resolve_threads(cfg.threads), [&](std::size_t task) {
    Part& p = parts[task];
    p.counts.assign(static_cast<std::size_t>(grid.nx) * grid.ny, 0);
    sampling::GaussianStream g({cfg.seed, static_cast<std::uint64_t>(task)});
    const std::int64_t count = samples_in_stream(cfg, static_cast<int>(task));
    for (std::int64_t s = 0; s < count; ++s) {
      const sampling::MatrixSample m = sampling::sample(cfg.spec, g);
      ++p.samples;
      std::vector<cd> ev;
      try {
        ev = m.is_real() ? linalg::eigenvalues(m.real) : linalg::eigenvalues(m.complex);
      } catch (const NumericalError&) {
        ++p.discarded;
        continue;
      }
      for (const cd& z : ev) {
        if (complex_only && z.imag() == 0.0) {
          ++p.real;
          continue;
        }
        if (z.real() < grid.x0 || z.real() > grid.x1 || z.imag() < grid.y0 || z.imag() > grid.y1) {
          ++p.outside;
          continue;
        }
        const int ix = std::min(grid.nx - 1, static_cast<int>((z.real() - grid.x0) / dx));
        const int iy = std::min(grid.ny - 1, static_cast<int>((z.imag() - grid.y0) / dy));
        ++p.counts[static_cast<std::size_t>(iy) * grid.nx + ix];
      }
    }
  });

  Histogram h;
  h.grid = grid;
  h.counts.assign(static_cast<std::size_t>(grid.nx) * grid.ny, 0);
  for (const Part& p : parts) {
    for (std::size_t i = 0; i < h.counts.size(); ++i) h.counts[i] += p.counts[i];
    h.outside += p.outside;
    h.skipped_real += p.real;
    h.samples += p.samples;
    h.discarded += p.discarded;
  }
  return h;
}

}  // namespace egin::spectra
