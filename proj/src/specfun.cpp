#include "egin/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "egin/errors.hpp"

namespace egin::specfun {

std::complex<double> hermite_he(int k, std::complex<double> x) {
  require(k >= 0, "hermite_he: order must be non-negative");
  std::complex<double> prev{1.0, 0.0};
  if (k == 0) return prev;
  std::complex<double> cur = x;
  for (int j = 1; j < k; ++j) {
    const std::complex<double> next = x * cur - static_cast<double>(j) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

std::vector<ScaledValue> pair_terms(int K, std::complex<double> z, double tau) {
  require(K >= 0, "pair_terms: K must be non-negative");
  require(tau >= 0.0 && tau <= 1.0, "pair_terms: tau must lie in [0, 1]");
  std::vector<ScaledValue> out;
  out.reserve(static_cast<std::size_t>(K) + 1);
  out.emplace_back(1.0, 0.0);
  if (K == 0) return out;

  // g_k = tau^{k/2} He_k(z / sqrt(tau)) / sqrt(k!), shared scale exp(log_scale).
  std::complex<double> prev{1.0, 0.0};
  std::complex<double> cur = z;
  double log_scale = 0.0;
  out.emplace_back(std::norm(cur), 0.0);
  for (int k = 1; k < K; ++k) {
    const double kd = k;
    std::complex<double> next = (z * cur - std::sqrt(kd) * tau * prev) / std::sqrt(kd + 1.0);
    prev = cur;
    cur = next;
    const double mag = std::abs(cur);
    if (mag != 0.0 && (mag > 0x1p300 || mag < 0x1p-300)) {
      const int e = std::ilogb(mag);
      cur = {std::ldexp(cur.real(), -e), std::ldexp(cur.imag(), -e)};
      prev = {std::ldexp(prev.real(), -e), std::ldexp(prev.imag(), -e)};
      log_scale += e * std::numbers::ln2;
    }
    out.emplace_back(std::norm(cur), 2.0 * log_scale);
  }
  return out;
}

std::vector<ScaledValue> hermite_pair_sequence(int K, std::complex<double> z, double tau) {
  require(tau > 0.0 && tau <= 1.0,
          "hermite_pair_sequence: tau must lie in (0, 1]; use the tau -> 0 limit path");
  return pair_terms(K, z, tau);
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxIter = 100000;

// Lower regularized gamma P(a, x) by its power series.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kMaxIter; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized gamma Q(a, x) by the modified Lentz continued fraction.
double gamma_q_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_q(double a, double x) {
  require(a > 0.0, "gamma_q: a must be positive");
  require(x >= 0.0, "gamma_q: x must be non-negative");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return std::clamp(1.0 - gamma_p_series(a, x), 0.0, 1.0);
  return std::clamp(gamma_q_fraction(a, x), 0.0, 1.0);
}

double theta_ratio(int n, int m, double x) {
  require(n - m + 1 >= 1, "theta_ratio: need N - M + 1 >= 1");
  require(x >= 0.0, "theta_ratio: x must be non-negative");
  return gamma_q(static_cast<double>(n - m + 1), static_cast<double>(n) * x);
}

double erfc(double x) { return std::erfc(x); }

double erfcx(double x) {
  if (std::isnan(x)) return x;
  if (x < 0.0) {
    const double hi = x * x;
    const double lo = std::fma(x, x, -hi);
    return 2.0 * std::exp(hi) * std::exp(lo) - erfcx(-x);
  }
  if (x < 10.0) {
    const double hi = x * x;
    const double lo = std::fma(x, x, -hi);
    return std::exp(hi) * std::exp(lo) * std::erfc(x);
  }
  // erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
  double f = x;
  for (int k = 60; k >= 1; --k) f = x + 0.5 * k / f;
  return 1.0 / (std::sqrt(std::numbers::pi) * f);
}

double log_add(double a, double b) {
  constexpr double ninf = -std::numeric_limits<double>::infinity();
  if (a == ninf) return b;
  if (b == ninf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

}  // namespace egin::specfun
