#include <cmath>
#include <numbers>

#include <doctest.h>

#include "egin/quadrature.hpp"

using namespace egin;

TEST_SUITE("quadrature") {

TEST_CASE("one-dimensional integrals") {
  const auto r = quad::integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(quad::integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, {1e-12, 1e-10, 20000}).value ==
        doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("semi-infinite integrals") {
  CHECK(quad::integrate_to_infinity([](double x) { return std::exp(-x); }, 0.0, 1.0).value ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(quad::integrate_to_infinity([](double x) { return std::exp(-x * x); }, 0.0, 0.5).value ==
        doctest::Approx(std::sqrt(std::numbers::pi) / 2).epsilon(1e-12));
}

TEST_CASE("two-dimensional integrals") {
  CHECK(quad::integrate_2d([](double x, double y) { return x * y; }, 0, 1, 0, 2).value ==
        doctest::Approx(1.0).epsilon(1e-12));
  const auto g = quad::integrate_2d([](double x, double y) { return std::exp(-x * x - y * y); }, -6, 6, -6, 6);
  CHECK(g.value == doctest::Approx(std::numbers::pi).epsilon(1e-10));
}

}
