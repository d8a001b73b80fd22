#include <cmath>
#include <numbers>

#include <doctest.h>

#include "egin/errors.hpp"
#include "egin/finite_n.hpp"

using namespace egin;

namespace {

// sum_{j<=k} r^j / j!
double e_trunc(int k, double r) {
  double term = 1.0, sum = 0.0;
  for (int j = 0; j <= k; ++j) {
    sum += term;
    term *= r / (j + 1);
  }
  return k < 0 ? 0.0 : sum;
}

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST_SUITE("finite_n") {

// Reference values computed with an independent multiprecision evaluation of
// the closed forms.
TEST_CASE("frozen values at N = 4, tau = 0.5") {
  const ComplexPoint z{0.3, 0.6};
  const auto ue = finite_n::evaluate({Ensemble::ComplexElliptic, 4, 0.5}, z);
  CHECK(ue.density == doctest::Approx(0.346401455218554).epsilon(1e-13));
  CHECK(ue.overlap == doctest::Approx(0.884879595136499).epsilon(1e-13));
  CHECK(*ue.conditional == doctest::Approx(2.55449156406749).epsilon(1e-13));
  const auto oe = finite_n::evaluate({Ensemble::RealElliptic, 4, 0.5}, z);
  CHECK(oe.density == doctest::Approx(0.176573716185502).epsilon(1e-13));
  CHECK(oe.overlap == doctest::Approx(0.586108739641158).epsilon(1e-13));
  CHECK(*oe.conditional == doctest::Approx(3.31934306137281).epsilon(1e-13));
}

TEST_CASE("building blocks at N = 6 match the double-integral values") {
  const ComplexPoint z{0.3, 0.6};
  CHECK(finite_n::density_eginue(6, z, 0.5) == doctest::Approx(0.392252264643983).epsilon(1e-12));
  CHECK(finite_n::r_n(6, z, 0.5) == doctest::Approx(0.593521773894723).epsilon(1e-12));
  CHECK(finite_n::p_n(6, z, 0.5) == doctest::Approx(4.54721877910156).epsilon(1e-12));
  CHECK(finite_n::t_n(6, z, 0.5) == doctest::Approx(9.85647866679687).epsilon(1e-12));
}

TEST_CASE("Ginibre limit: density and Chalker-Mehlig overlap") {
  for (int n : {2, 5, 12})
    for (double tau : {0.0, 1e-10})
      for (ComplexPoint z : {ComplexPoint{0.0, 0.0}, ComplexPoint{1.1, -0.4}, ComplexPoint{-2.0, 1.5}}) {
        const double r = z.x * z.x + z.y * z.y;
        const EnsembleSpec s{Ensemble::ComplexElliptic, n, tau};
        // the true values move by O(tau |z|^2) away from tau = 0
        const double eps = 1e-12 + 2 * tau * r;
        CAPTURE(n);
        CAPTURE(tau);
        CHECK(finite_n::density_eginue(s, z) == doctest::Approx(std::exp(-r) * e_trunc(n - 1, r) / kPi).epsilon(eps));
        const double o = std::exp(-r) * (n * e_trunc(n - 1, r) - r * e_trunc(n - 2, r)) / kPi;
        CHECK(finite_n::overlap_eginue(s, z) == doctest::Approx(o).epsilon(eps));
      }
}

TEST_CASE("real Ginibre complex density at tau = 0") {
  for (int n : {2, 6}) {
    const ComplexPoint z{0.7, 0.9};
    const double r = z.x * z.x + z.y * z.y;
    const double ref = std::sqrt(2.0 / kPi) * z.y * std::exp(z.y * z.y - z.x * z.x) * std::erfc(std::sqrt(2.0) * z.y) *
                       e_trunc(n - 2, r);
    CHECK(finite_n::density_eginoe_complex({Ensemble::RealElliptic, n, 0.0}, z) == doctest::Approx(ref).epsilon(1e-12));
  }
}

TEST_CASE("symmetries") {
  const EnsembleSpec ue{Ensemble::ComplexElliptic, 9, 0.3};
  const EnsembleSpec oe{Ensemble::RealElliptic, 9, 0.3};
  const ComplexPoint z{0.9, 0.4}, zc{0.9, -0.4}, zm{-0.9, 0.4};
  CHECK(finite_n::overlap_eginue(ue, z) == doctest::Approx(finite_n::overlap_eginue(ue, zc)).epsilon(1e-14));
  CHECK(finite_n::overlap_eginue(ue, z) == doctest::Approx(finite_n::overlap_eginue(ue, zm)).epsilon(1e-14));
  CHECK(finite_n::overlap_eginoe(oe, z) == doctest::Approx(finite_n::overlap_eginoe(oe, zc)).epsilon(1e-14));
  CHECK(finite_n::density_eginoe_complex(oe, z) == doctest::Approx(finite_n::density_eginoe_complex(oe, zm)).epsilon(1e-14));
}

TEST_CASE("conditional mean is at least one and grows with N in the bulk") {
  const ComplexPoint z{0.2, 0.1};
  double prev = 0.0;
  for (int n : {4, 16, 64}) {
    const auto c = finite_n::conditional_mean({Ensemble::ComplexElliptic, n, 0.4}, z);
    REQUIRE(c.has_value());
    CHECK(*c >= 1.0);
    CHECK(*c > prev);
    prev = *c;
  }
}

TEST_CASE("far tail: finite logs, underflow flagged") {
  const EnsembleSpec s{Ensemble::ComplexElliptic, 20, 0.5};
  const auto r = finite_n::evaluate(s, {60.0, 40.0});
  CHECK(r.density_underflow());
  CHECK(std::isfinite(r.log_density));
  CHECK(std::isfinite(r.log_overlap));
  CHECK(r.log_overlap > r.log_density);
}

TEST_CASE("batch evaluation agrees with pointwise") {
  const EnsembleSpec s{Ensemble::RealElliptic, 30, 0.6};
  std::vector<ComplexPoint> pts;
  for (int i = 0; i < 13; ++i) pts.push_back({-4.0 + 0.61 * i, 0.05 + 0.3 * i});
  const auto batch = finite_n::evaluate_batch(s, pts);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto one = finite_n::evaluate(s, pts[i]);
    CHECK(batch[i].density == doctest::Approx(one.density).epsilon(1e-12));
    CHECK(batch[i].overlap == doctest::Approx(one.overlap).epsilon(1e-12));
  }
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(finite_n::overlap_eginoe({Ensemble::RealElliptic, 5, 0.5}, {0.3, 0.0}), DomainError);
  CHECK_THROWS_AS(finite_n::evaluate({Ensemble::ComplexElliptic, 5, 1.2}, {0.3, 0.1}), DomainError);
  CHECK_THROWS_AS(finite_n::evaluate({Ensemble::ComplexElliptic, 1, 0.2}, {0.3, 0.1}), DomainError);
  CHECK_THROWS_AS(finite_n::evaluate({Ensemble::ComplexElliptic, 5, -0.1}, {0.3, 0.1}), DomainError);
}

}
