#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "egin/ensemble.hpp"
#include "egin/sampling.hpp"

namespace egin::spectra {

/// Samples whose eigenvector residual exceeds this are discarded.
inline constexpr double kDiscardResidual = 1e-6;

/// Eigenvalues sorted by (Re, Im) with the self-overlap of each.
/// residual_max = max_n |X s_n - lambda_n s_n| / (|X|_F |s_n|).
struct SpectralSample {
  std::vector<std::complex<double>> eigenvalues;
  std::vector<double> overlaps;
  double residual_max = 0.0;
};

/// SpectralSample plus S (right eigenvectors as columns) and S^{-1}, whose
/// rows are the left eigenvectors normalised so that L S = 1.
struct Decomposition {
  SpectralSample spectrum;
  Eigen::MatrixXcd right;
  Eigen::MatrixXcd left;
};

/// X = S Lambda S^{-1} with S from the dense eigensolver and S^{-1} from one LU
/// factorisation; O_nn = |row_n(S^{-1})|^2 |col_n(S)|^2. Throws NumericalError
/// on solver failure or when residual_max > kDiscardResidual.
SpectralSample decompose(const sampling::MatrixSample& m);
Decomposition decompose_with_vectors(const sampling::MatrixSample& m);
Decomposition decompose_with_vectors(const Eigen::MatrixXcd& x);

/// max_{ij} |(S^{-1} S)_{ij} - delta_ij|.
double biorthogonality_residual(const Decomposition& d);

/// Eigenvalues only, sorted by (Re, Im).
std::vector<std::complex<double>> sorted_eigenvalues(const sampling::MatrixSample& m);

/// All eigenvalues of the sample and the overlaps of those picked by `select`,
/// from the Hessenberg form: eigenvalues by QR without vectors, then left and
/// right eigenvectors of H for the selected eigenvalues only by inverse
/// iteration. Overlaps are invariant under the unitary reduction.
struct SelectedOverlaps {
  std::vector<std::complex<double>> eigenvalues;  // sorted by (Re, Im)
  std::vector<int> selected;                      // indices into eigenvalues
  std::vector<double> overlaps;                   // one per selected index
  double residual_max = 0.0;
};

SelectedOverlaps selected_overlaps(const sampling::MatrixSample& m,
                                   const std::function<bool(std::complex<double>)>& select);

// --- Monte Carlo estimators ------------------------------------------------

enum class WindowMode { Box, KNearest };

/// Box: eigenvalues with |Re - x| <= hx and |Im - y| <= hy.
/// KNearest: the k eigenvalues closest to the target across the whole run,
/// ties broken by (stream, sample, eigenvalue index).
struct Window {
  WindowMode mode = WindowMode::Box;
  double hx = 0.0;
  double hy = 0.0;
  int k = 1000;
};

enum class Path { Auto, Full, Selected };

struct McConfig {
  EnsembleSpec spec;
  std::uint64_t seed = 1;
  int streams = 64;          // one SeededStream per stream id 0..streams-1
  std::int64_t budget = 0;   // matrices in total
  int threads = 0;           // 0: OVERLAPS_THREADS, else hardware concurrency
  Path path = Path::Auto;

  void validate() const;
};

struct ConditionalEstimate {
  ComplexPoint target;
  Window window;
  double mean = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(count)
  std::int64_t count = 0;
  double radius = 0.0;     // KNearest: distance of the k-th eigenvalue
  bool flagged = false;    // no eigenvalue landed in the window
};

struct EstimateRun {
  std::vector<ConditionalEstimate> estimates;
  std::int64_t samples = 0;
  std::int64_t discarded = 0;
};

EstimateRun conditional_overlap_estimate(const McConfig& cfg, const std::vector<ComplexPoint>& targets,
                                         const Window& window);

/// Rectangular grid of nx by ny bins over [x0, x1] x [y0, y1].
struct Grid {
  double x0 = -1.0, x1 = 1.0;
  int nx = 1;
  double y0 = -1.0, y1 = 1.0;
  int ny = 1;

  void validate() const;
  double bin_area() const { return (x1 - x0) / nx * (y1 - y0) / ny; }
};

struct Histogram {
  Grid grid;
  std::vector<std::uint64_t> counts;  // row-major, index iy * nx + ix
  std::int64_t samples = 0;
  std::int64_t discarded = 0;
  std::uint64_t outside = 0;          // eigenvalues that fell outside the grid
  std::uint64_t skipped_real = 0;     // real eigenvalues skipped under complex_only

  std::uint64_t count(int ix, int iy) const { return counts[static_cast<std::size_t>(iy) * grid.nx + ix]; }
  /// count / (samples * bin area): comparable with the eGinUE density, which integrates to N.
  double normalized(int ix, int iy) const;
};

/// Counts eigenvalues per bin. With complex_only, eigenvalues that are exactly
/// real (the real eigenvalues of a real matrix) are skipped, not counted as outside.
Histogram density_histogram(const McConfig& cfg, const Grid& grid, bool complex_only = false);

// --- running statistics ----------------------------------------------------

struct RunningStats {
  std::int64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x);
  static RunningStats merge(const RunningStats& a, const RunningStats& b);
  double variance() const { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
  double std_error() const;
};

}  // namespace egin::spectra
