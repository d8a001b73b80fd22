#include <cmath>
#include <complex>

#include <doctest.h>

#include "egin/errors.hpp"
#include "egin/sampling.hpp"
#include "egin/spectra.hpp"

using namespace egin;
using sampling::GaussianStream;
using sampling::Philox4x32;

TEST_SUITE("sampling") {

// Known-answer vectors of the Random123 reference implementation.
TEST_CASE("Philox4x32-10 known answers") {
  using B = Philox4x32::Block;
  CHECK(Philox4x32::bijection(B{0, 0, 0, 0}, {0, 0}) == B{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::bijection(B{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        B{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::bijection(B{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        B{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("same stream reproduces, different streams differ") {
  GaussianStream a({42, 3}), b({42, 3}), c({42, 4}), d({43, 3});
  int same_c = 0, same_d = 0;
  for (int i = 0; i < 1000; ++i) {
    const double x = a.next();
    CHECK(x == b.next());
    same_c += x == c.next();
    same_d += x == d.next();
  }
  CHECK(same_c == 0);
  CHECK(same_d == 0);
}

TEST_CASE("gaussian moments and uniform range") {
  GaussianStream g({7, 0});
  const int n = 200000;
  double s1 = 0, s2 = 0, s4 = 0;
  for (int i = 0; i < n; ++i) {
    const double x = g.next();
    s1 += x;
    s2 += x * x;
    s4 += x * x * x * x;
  }
  CHECK(std::abs(s1 / n) < 4 * std::sqrt(1.0 / n));
  CHECK(std::abs(s2 / n - 1) < 4 * std::sqrt(2.0 / n));
  CHECK(std::abs(s4 / n - 3) < 4 * std::sqrt(96.0 / n));
  for (int i = 0; i < 10000; ++i) {
    const double u = g.next_uniform();
    CHECK((u > 0.0 && u < 1.0));
  }
}

TEST_CASE("tau = 1 gives Hermitian and symmetric matrices") {
  GaussianStream g({1, 0});
  const auto ue = sampling::sample({Ensemble::ComplexElliptic, 6, 1.0}, g);
  CHECK((ue.complex - ue.complex.adjoint()).norm() < 1e-14);
  const auto oe = sampling::sample({Ensemble::RealElliptic, 6, 1.0}, g);
  CHECK((oe.real - oe.real.transpose()).norm() < 1e-14);
  GaussianStream h({1, 1});
  const auto anti = sampling::sample({Ensemble::RealElliptic, 6, 0.0}, h);
  CHECK((anti.real - anti.real.transpose()).norm() > 0.1);
}

TEST_CASE("entry covariances") {
  // E|X_ij|^2 = 1 and E[X_ij X_ji] = tau for both ensembles.
  const double tau = 0.6;
  const int reps = 20000, n = 3;
  for (Ensemble e : {Ensemble::ComplexElliptic, Ensemble::RealElliptic}) {
    GaussianStream g({11, 0});
    double off2 = 0, pair = 0, pair2 = 0, diag2 = 0;
    for (int r = 0; r < reps; ++r) {
      const auto m = sampling::sample({e, n, tau}, g).as_complex();
      off2 += std::norm(m(0, 1));
      const double p = (m(0, 1) * m(1, 0)).real();
      pair += p;
      pair2 += p * p;
      diag2 += e == Ensemble::RealElliptic ? std::norm(m(2, 2)) : (m(2, 2) * m(2, 2)).real();
    }
    CAPTURE(ensemble_name(e));
    const double se_pair = std::sqrt(pair2 / reps - std::pow(pair / reps, 2)) / std::sqrt(reps);
    CHECK(std::abs(pair / reps - tau) < 4 * se_pair);
    CHECK(off2 / reps == doctest::Approx(1.0).epsilon(0.05));
    // Real diagonal: variance 1 + tau. Complex diagonal: E[X_ii^2] = tau.
    const double expect_diag = e == Ensemble::RealElliptic ? 1 + tau : tau;
    CHECK(diag2 / reps == doctest::Approx(expect_diag).epsilon(0.06));
  }
}

TEST_CASE("log density is normalised: importance weights average to one") {
  const double t1 = 0.3, t2 = 0.45;
  const int reps = 40000;
  for (Ensemble e : {Ensemble::ComplexElliptic, Ensemble::RealElliptic}) {
    GaussianStream g({5, 2});
    spectra::RunningStats st;
    for (int r = 0; r < reps; ++r) {
      const auto m = sampling::sample({e, 2, t1}, g);
      st.add(std::exp(sampling::log_jpdf(m, t2) - sampling::log_jpdf(m, t1)));
    }
    CAPTURE(ensemble_name(e));
    CHECK(std::abs(st.mean - 1.0) < 4 * st.std_error());
  }
}

TEST_CASE("log density rejects tau = 1") {
  GaussianStream g({1, 0});
  const auto m = sampling::sample({Ensemble::ComplexElliptic, 3, 0.5}, g);
  CHECK_THROWS_AS(sampling::log_jpdf(m, 1.0), DomainError);
}

}
