#include <cmath>
#include <numbers>

#include <doctest.h>

#include "egin/asymptotics.hpp"
#include "egin/errors.hpp"
#include "egin/finite_n.hpp"
#include "egin/quadrature.hpp"

using namespace egin;
namespace A = egin::asymptotics;

TEST_SUITE("asymptotics") {

TEST_CASE("Ginibre bulk: overlap (1 - |w|^2)/pi, density 1/pi") {
  CHECK(A::snh_bulk_overlap(0.0, 0.3, 0.4) == doctest::Approx((1 - 0.25) / std::numbers::pi).epsilon(1e-13));
  CHECK(A::snh_bulk_density(0.0, 0.3, 0.4) == doctest::Approx(1 / std::numbers::pi).epsilon(1e-13));
  CHECK(A::snh_bulk_overlap(0.0, 1.1, 0.0) == 0.0);
}

TEST_CASE("elliptic bulk density is uniform on the ellipse") {
  const double tau = 0.4;
  const double inside = A::snh_bulk_density(tau, 1.0, 0.3);
  CHECK(inside == doctest::Approx(1 / (std::numbers::pi * (1 - tau * tau))).epsilon(1e-13));
  CHECK(A::snh_bulk_density(tau, 1.38, 0.0) > 0.0);
  CHECK(A::snh_bulk_density(tau, 1.41, 0.6) == 0.0);
}

// Values from an independent scipy evaluation of the integrals.
TEST_CASE("weak non-Hermiticity overlaps") {
  CHECK(A::wnh_bulk_overlap_eginue(1.0, 0.3, 0.5) == doctest::Approx(2.76091378765814).epsilon(1e-11));
  CHECK(A::wnh_bulk_overlap_eginoe(2.0, 0.0, 0.5) == doctest::Approx(8.15507872698038).epsilon(1e-11));
  CHECK(A::wnh_bulk_overlap_eginue(1.0, 2.1, 0.5) == 0.0);
}

TEST_CASE("line-normalised density integrates to one") {
  for (Ensemble e : {Ensemble::ComplexElliptic, Ensemble::RealElliptic}) {
    const auto fy = [&](double y) { return A::wnh_conditional_density(e, 1.5, A::Fixed::FixX, 0.0, y); };
    const auto ry = quad::integrate_to_infinity(fy, 0.0, 0.5);
    CHECK(2.0 * ry.value == doctest::Approx(1.0).epsilon(1e-7));
    const auto fx = [&](double x) { return A::wnh_conditional_density(e, 1.0, A::Fixed::FixY, 1.0, x); };
    CHECK(quad::integrate(fx, -2.0, 2.0).value == doctest::Approx(1.0).epsilon(1e-7));
  }
}

TEST_CASE("theta times exp is the truncated exponential series") {
  for (double s : {-0.7, 0.0, 0.4, 1.3}) {
    double term = 1.0, sum = 0.0;
    for (int k = 0; k <= 18; ++k) {
      sum += term;
      term *= 20 * s / (k + 1);
    }
    CHECK(A::theta_times_exp(20, 2, s) == doctest::Approx(sum).epsilon(1e-12));
  }
}

TEST_CASE("integral oracle reproduces the closed forms") {
  const ComplexPoint z{0.3, 0.6};
  const double tau = 0.5;
  const auto rho = A::integral_rep_oracle(A::OracleKind::DensityEgUE, 6, z, tau);
  REQUIRE(rho.converged);
  CHECK(rho.value == doctest::Approx(finite_n::density_eginue(6, z, tau)).epsilon(1e-9));
  const auto p = A::integral_rep_oracle(A::OracleKind::P, 6, z, tau);
  CHECK(p.value == doctest::Approx(finite_n::p_n(6, z, tau)).epsilon(1e-9));
  const auto t = A::integral_rep_oracle(A::OracleKind::T, 6, z, tau);
  CHECK(t.value == doctest::Approx(finite_n::t_n(6, z, tau)).epsilon(1e-9));
}

TEST_CASE("finite N approaches the strong bulk limit") {
  const double tau = 0.5;
  const int n = 1000;
  const ComplexPoint z = A::snh_bulk_point(n, 0.4, 0.2);
  const auto c = finite_n::conditional_mean({Ensemble::ComplexElliptic, n, tau}, z);
  A::RegimeQuery q;
  q.regime = A::Regime::SnhBulk;
  q.tau = tau;
  q.a = 0.4;
  q.b = 0.2;
  CHECK(*c / n == doctest::Approx(A::evaluate(q).conditional).epsilon(0.02));
}

TEST_CASE("regime queries validate their parameters") {
  A::RegimeQuery q;
  q.regime = A::Regime::SnhDepletion;
  q.ensemble = Ensemble::ComplexElliptic;
  CHECK_THROWS_AS(A::evaluate(q), DomainError);
  q.regime = A::Regime::SnhBulk;
  q.tau = 1.0;
  CHECK_THROWS_AS(A::evaluate(q), DomainError);
}

}
