#include <cmath>
#include <complex>
#include <numbers>

#include <doctest.h>

#include "egin/specfun.hpp"

using namespace egin;
using cd = std::complex<double>;

namespace {

// e^{-x} sum_{k<a} x^k / k! for integer a
double q_integer(int a, double x) {
  double term = 1.0, sum = 0.0;
  for (int k = 0; k < a; ++k) {
    sum += term;
    term *= x / (k + 1);
  }
  return std::exp(-x) * sum;
}

}  // namespace

TEST_SUITE("specfun") {

TEST_CASE("hermite polynomials match explicit forms") {
  const cd x(0.7, -1.3);
  CHECK(std::abs(specfun::hermite_he(0, x) - 1.0) < 1e-15);
  CHECK(std::abs(specfun::hermite_he(1, x) - x) < 1e-15);
  CHECK(std::abs(specfun::hermite_he(3, x) - (x * x * x - 3.0 * x)) < 1e-13);
  CHECK(std::abs(specfun::hermite_he(4, x) - (std::pow(x, 4) - 6.0 * x * x + 3.0)) < 1e-12);
  const cd he5 = std::pow(x, 5) - 10.0 * std::pow(x, 3) + 15.0 * x;
  CHECK(std::abs(specfun::hermite_he(5, x) - he5) < 1e-12 * std::abs(he5));
}

TEST_CASE("regularized gamma against the finite sum for integer order") {
  for (int a : {1, 3, 10, 40})
    for (double x : {0.1, 2.0, 9.5, 10.5, 45.0}) {
      const double ref = q_integer(a, x);
      CAPTURE(a);
      CAPTURE(x);
      CHECK(specfun::gamma_q(a, x) == doctest::Approx(ref).epsilon(1e-12));
    }
  CHECK(specfun::gamma_q(0.5, 2.0) == doctest::Approx(std::erfc(std::sqrt(2.0))).epsilon(1e-13));
  CHECK(specfun::gamma_q(3.0, 0.0) == 1.0);
}

TEST_CASE("theta ratio is Q(N-M+1, N x)") {
  CHECK(specfun::theta_ratio(10, 2, 0.8) == doctest::Approx(q_integer(9, 8.0)).epsilon(1e-12));
}

TEST_CASE("erfcx small and large arguments") {
  for (double x : {-2.0, 0.0, 0.3, 2.5, 6.0})
    CHECK(specfun::erfcx(x) == doctest::Approx(std::exp(x * x) * std::erfc(x)).epsilon(1e-13));
  const double x = 1e4;
  const double asym = (1.0 - 1.0 / (2 * x * x) + 3.0 / (4 * std::pow(x, 4))) / (x * std::sqrt(std::numbers::pi));
  CHECK(specfun::erfcx(x) == doctest::Approx(asym).epsilon(1e-14));
  CHECK(std::isfinite(specfun::erfcx(1e200)));
}

TEST_CASE("log_add") {
  CHECK(specfun::log_add(std::log(2.0), std::log(3.0)) == doctest::Approx(std::log(5.0)));
  CHECK(specfun::log_add(1000.0, 1000.0) == doctest::Approx(1000.0 + std::log(2.0)));
  CHECK(specfun::log_add(-INFINITY, 1.5) == 1.5);
}

TEST_CASE("pair terms agree with the Hermite definition and reduce to |z|^2k/k! at tau 0") {
  const cd z(0.8, 0.45);
  const double tau = 0.37;
  const auto a = specfun::pair_terms(12, z, tau);
  const auto b = specfun::hermite_pair_sequence(12, z, tau);
  REQUIRE(a.size() == 13);
  double fact = 1.0;
  for (int k = 0; k <= 12; ++k) {
    if (k > 0) fact *= k;
    const cd he = specfun::hermite_he(k, z / std::sqrt(tau));
    const double direct = std::pow(tau, k) / fact * std::norm(he);
    CHECK(a[k].real() == doctest::Approx(direct).epsilon(1e-11));
    CHECK(b[k].real() == doctest::Approx(direct).epsilon(1e-11));
  }
  const auto c = specfun::pair_terms(8, z, 0.0);
  fact = 1.0;
  for (int k = 0; k <= 8; ++k) {
    if (k > 0) fact *= k;
    CHECK(c[k].real() == doctest::Approx(std::pow(std::norm(z), k) / fact).epsilon(1e-13));
  }
}

}
