#include <cmath>
#include <complex>
#include <numeric>

#include <doctest.h>

#include "egin/parallel.hpp"
#include "egin/sampling.hpp"
#include "egin/spectra.hpp"

using namespace egin;
using cd = std::complex<double>;

TEST_SUITE("spectra") {

TEST_CASE("two by two triangular matrix has O = 1 + |b|^2/|a-d|^2") {
  Eigen::MatrixXcd x(2, 2);
  const cd a(0.5, 0.2), b(1.5, -0.7), d(-0.3, 0.1);
  x << a, b, 0.0, d;
  const auto dec = spectra::decompose_with_vectors(x);
  const double expect = 1.0 + std::norm(b) / std::norm(a - d);
  for (double o : dec.spectrum.overlaps) CHECK(o == doctest::Approx(expect).epsilon(1e-12));
  CHECK(spectra::biorthogonality_residual(dec) < 1e-13);
}

TEST_CASE("normal matrices have unit overlaps") {
  sampling::GaussianStream g({3, 0});
  const auto h = sampling::sample({Ensemble::ComplexElliptic, 12, 1.0}, g);
  for (double o : spectra::decompose(h).overlaps) CHECK(o == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("real matrices: conjugate pairs share overlaps") {
  sampling::GaussianStream g({9, 1});
  const auto m = sampling::sample({Ensemble::RealElliptic, 20, 0.3}, g);
  const auto s = spectra::decompose(m);
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
    if (s.eigenvalues[i].imag() <= 0) continue;
    const cd c = std::conj(s.eigenvalues[i]);
    for (std::size_t j = 0; j < s.eigenvalues.size(); ++j)
      if (std::abs(s.eigenvalues[j] - c) < 1e-12)
        CHECK(s.overlaps[j] == doctest::Approx(s.overlaps[i]).epsilon(1e-8));
  }
  for (double o : s.overlaps) CHECK(o >= 1.0 - 1e-12);
}

TEST_CASE("selected path agrees with the full decomposition") {
  for (Ensemble e : {Ensemble::ComplexElliptic, Ensemble::RealElliptic}) {
    sampling::GaussianStream g({21, 0});
    const auto m = sampling::sample({e, 90, 0.5}, g);
    const auto full = spectra::decompose(m);
    const auto sel = spectra::selected_overlaps(m, [](cd z) { return std::abs(z.real()) < 3.0 && z.imag() > 1.0; });
    REQUIRE(sel.eigenvalues.size() == full.eigenvalues.size());
    REQUIRE(!sel.selected.empty());
    for (std::size_t k = 0; k < sel.selected.size(); ++k) {
      const int i = sel.selected[k];
      // sorted orders agree up to rounding of the eigenvalues
      std::size_t best = 0;
      for (std::size_t j = 1; j < full.eigenvalues.size(); ++j)
        if (std::abs(full.eigenvalues[j] - sel.eigenvalues[i]) < std::abs(full.eigenvalues[best] - sel.eigenvalues[i]))
          best = j;
      CHECK(std::abs(full.eigenvalues[best] - sel.eigenvalues[i]) < 1e-9);
      CHECK(sel.overlaps[k] == doctest::Approx(full.overlaps[best]).epsilon(1e-8));
    }
  }
}

TEST_CASE("histogram accounts for every eigenvalue") {
  spectra::McConfig cfg;
  cfg.spec = {Ensemble::RealElliptic, 12, 0.4};
  cfg.budget = 300;
  cfg.streams = 8;
  cfg.threads = 2;
  const spectra::Grid grid{-3, 3, 6, -2, 2, 4};
  const auto h = spectra::density_histogram(cfg, grid);
  const std::uint64_t inside = std::accumulate(h.counts.begin(), h.counts.end(), std::uint64_t{0});
  CHECK(inside + h.outside == static_cast<std::uint64_t>((h.samples - h.discarded) * 12));
  const auto hc = spectra::density_histogram(cfg, grid, true);
  const std::uint64_t inside_c = std::accumulate(hc.counts.begin(), hc.counts.end(), std::uint64_t{0});
  CHECK(inside_c + hc.outside + hc.skipped_real == static_cast<std::uint64_t>((hc.samples - hc.discarded) * 12));
  CHECK(hc.skipped_real > 0);
}

TEST_CASE("estimates do not depend on the worker count") {
  spectra::McConfig cfg;
  cfg.spec = {Ensemble::ComplexElliptic, 70, 0.5};
  cfg.budget = 120;
  cfg.streams = 16;
  const std::vector<ComplexPoint> targets{{0.0, 1.0}, {2.0, -0.5}};
  for (spectra::WindowMode mode : {spectra::WindowMode::Box, spectra::WindowMode::KNearest}) {
    spectra::Window w{mode, 0.5, 0.5, 50};
    cfg.threads = 1;
    const auto a = spectra::conditional_overlap_estimate(cfg, targets, w);
    cfg.threads = 5;
    const auto b = spectra::conditional_overlap_estimate(cfg, targets, w);
    for (std::size_t i = 0; i < targets.size(); ++i) {
      CHECK(a.estimates[i].mean == b.estimates[i].mean);
      CHECK(a.estimates[i].std_error == b.estimates[i].std_error);
      CHECK(a.estimates[i].count == b.estimates[i].count);
    }
  }
}

TEST_CASE("k-nearest uses exactly k eigenvalues") {
  spectra::McConfig cfg;
  cfg.spec = {Ensemble::RealElliptic, 10, 0.2};
  cfg.budget = 50;
  cfg.streams = 4;
  cfg.threads = 1;
  const auto r = spectra::conditional_overlap_estimate(cfg, {{0.0, 0.5}}, {spectra::WindowMode::KNearest, 0, 0, 37});
  CHECK(r.estimates[0].count == 37);
  CHECK(r.estimates[0].radius > 0.0);
}

TEST_CASE("running statistics merge like a single pass") {
  spectra::RunningStats all, a, b;
  for (int i = 0; i < 50; ++i) {
    const double x = std::sin(i * 1.3) * 10 + i;
    all.add(x);
    (i < 17 ? a : b).add(x);
  }
  const auto m = spectra::RunningStats::merge(a, b);
  CHECK(m.count == all.count);
  CHECK(m.mean == doctest::Approx(all.mean).epsilon(1e-14));
  CHECK(m.variance() == doctest::Approx(all.variance()).epsilon(1e-12));
}

TEST_CASE("pairwise reduction is ordered") {
  std::vector<std::string> v{"a", "b", "c", "d", "e"};
  CHECK(parallel::pairwise_reduce(v, [](const std::string& x, const std::string& y) { return "(" + x + y + ")"; }) ==
        "(((ab)(cd))e)");
  CHECK(parallel::resolve_threads(3) == 3);
}

}
