#include <algorithm>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "egin/finite_n.hpp"
#include "egin/kernels.hpp"
#include "egin/sampling.hpp"

using namespace egin;

TEST_SUITE("kernels") {

TEST_CASE("vector variants match the scalar reference") {
  if (kernels::detected_isa() != kernels::Isa::Avx2) {
    MESSAGE("AVX2 not available; only the scalar kernels are exercised");
    return;
  }
  sampling::GaussianStream g({99, 0});
  const std::size_t np = 37;
  std::vector<double> xs(np), ys(np);
  for (std::size_t i = 0; i < np; ++i) {
    xs[i] = 3 * g.next();
    ys[i] = 2 * g.next();
  }
  for (double tau : {0.0, 1e-9, 0.35, 0.99}) {
    const int n = 41;
    std::vector<double> w = finite_n::eginoe_overlap_weights(n, tau);
    std::vector<double> d = finite_n::density_weights(n);
    const std::size_t k = std::max(w.size(), d.size());
    w.resize(k, 0.0);
    d.resize(k, 0.0);
    std::vector<double> rows = w;
    rows.insert(rows.end(), d.begin(), d.end());
    std::vector<double> a(2 * np), b(2 * np);
    kernels::PairSumBatch batch{xs, ys, tau, rows, w.size(), a};
    kernels::pair_sums_scalar(batch);
    batch.out_log = b;
    kernels::pair_sums_avx2(batch);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CAPTURE(tau);
      CHECK(b[i] == doctest::Approx(a[i]).epsilon(1e-13).scale(1.0));
    }
  }

  const std::size_t rows = 29, cols = 11, ld = 31;
  std::vector<double> m(2 * ld * cols);
  for (double& v : m) v = g.next();
  std::vector<double> n1(cols), n2(cols);
  kernels::column_norms2_scalar(m.data(), rows, cols, ld, n1.data());
  kernels::column_norms2_avx2(m.data(), rows, cols, ld, n2.data());
  for (std::size_t c = 0; c < cols; ++c) CHECK(n2[c] == doctest::Approx(n1[c]).epsilon(1e-14));

  std::vector<double> re(103), im(103);
  for (std::size_t i = 0; i < re.size(); ++i) {
    re[i] = g.next();
    im[i] = g.next();
  }
  re[5] = 0.5;  // exactly on the edge
  im[5] = 0.0;
  std::vector<unsigned char> h1(103), h2(103);
  const auto c1 = kernels::box_hits_scalar(re.data(), im.data(), re.size(), 0.25, 0.1, 0.25, 0.4, h1.data());
  const auto c2 = kernels::box_hits_avx2(re.data(), im.data(), re.size(), 0.25, 0.1, 0.25, 0.4, h2.data());
  CHECK(c1 == c2);
  CHECK(h1 == h2);
  CHECK(h1[5] == 1);
}

TEST_CASE("forcing the scalar path gives the same finite-N values") {
  const EnsembleSpec s{Ensemble::ComplexElliptic, 25, 0.5};
  std::vector<ComplexPoint> pts;
  for (int i = 0; i < 20; ++i) pts.push_back({-3.0 + 0.3 * i, 0.2 + 0.1 * i});
  const auto before = kernels::active_isa();
  kernels::force_isa(kernels::Isa::Scalar);
  const auto a = finite_n::evaluate_batch(s, pts);
  kernels::force_isa(kernels::detected_isa());
  const auto b = finite_n::evaluate_batch(s, pts);
  kernels::force_isa(before);
  for (std::size_t i = 0; i < pts.size(); ++i) CHECK(b[i].overlap == doctest::Approx(a[i].overlap).epsilon(1e-13));
}

}
