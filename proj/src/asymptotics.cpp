#include "egin/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "egin/errors.hpp"
#include "egin/quadrature.hpp"
#include "egin/specfun.hpp"

namespace egin::asymptotics {

namespace {

constexpr double kPi = std::numbers::pi;

// Switch from the sinh/cosh form to the completed-square form of the weak
// regime integrands above |y| = kBalancedAbove * alpha.
constexpr double kBalancedAbove = 5.0;

const quad::Tolerance kWnhTol{1e-13, 1e-11, 4000};

double ellipse_form(double tau, double wx, double wy) {
  return wx * wx / ((1.0 + tau) * (1.0 + tau)) + wy * wy / ((1.0 - tau) * (1.0 - tau));
}

void require_strong_tau(double tau) {
  require(tau >= 0.0 && tau < 1.0, "strong non-Hermiticity: tau must lie in [0, 1)");
}

double upper_limit(double X) { return kPi * std::sqrt(std::max(0.0, 1.0 - X * X / 4.0)); }

// 1 + alpha^2 pi^2 (1 - X^2/4 - u^2/pi^2) = 1 + alpha^2 (U^2 - u^2)
double overlap_weight(double alpha, double U, double u) { return 1.0 + alpha * alpha * (U * U - u * u); }

// exp(-2y^2/alpha^2) * int_0^U e^{-alpha^2 u^2/2} cosh(2yu) g(u) du, always in the
// completed-square form (a sum of two Gaussians, no cancellation).
template <class G>
double cosh_integral(double alpha, double y, double U, G g) {
  const double shift = 2.0 * y / alpha;
  const auto f = [&](double u) {
    const double a = alpha * u - shift, b = alpha * u + shift;
    return 0.5 * (std::exp(-0.5 * a * a) + std::exp(-0.5 * b * b)) * g(u);
  };
  const quad::Result r = quad::integrate(f, 0.0, U, kWnhTol);
  if (!r.converged) throw NumericalError("weak-regime cosh integral did not converge");
  return r.value;
}

// exp(-2y^2/alpha^2) * int_0^U u e^{-alpha^2 u^2/2} sinh(2|y|u) g(u) du.
template <class G>
double sinh_integral(double alpha, double y, double U, G g) {
  const double ay = std::abs(y);
  quad::Result r;
  if (ay <= kBalancedAbove * alpha) {
    const double damp = std::exp(-2.0 * ay * ay / (alpha * alpha));
    r = quad::integrate(
        [&](double u) {
          return u * std::exp(-0.5 * alpha * alpha * u * u) * std::sinh(2.0 * ay * u) * g(u);
        },
        0.0, U, kWnhTol);
    r.value *= damp;
  } else {
    const double shift = 2.0 * ay / alpha;
    r = quad::integrate(
        [&](double u) {
          const double a = alpha * u - shift, b = alpha * u + shift;
          return 0.5 * u * (std::exp(-0.5 * a * a) - std::exp(-0.5 * b * b)) * g(u);
        },
        0.0, U, kWnhTol);
  }
  if (!r.converged) throw NumericalError("weak-regime sinh integral did not converge");
  return r.value;
}

}  // namespace

void RegimeQuery::validate() const {
  switch (regime) {
    case Regime::SnhBulk:
      require_strong_tau(tau);
      break;
    case Regime::SnhDepletion:
      require_strong_tau(tau);
      require(b != 0.0, "depletion regime: requires xi != 0");
      break;
    case Regime::WnhBulk:
      require(alpha > 0.0, "weak non-Hermiticity: alpha must be > 0");
      if (ensemble == Ensemble::RealElliptic) require(b != 0.0, "weak regime (eGinOE): requires y != 0");
      break;
  }
}

double snh_bulk_overlap(double tau, double wx, double wy) {
  require_strong_tau(tau);
  const double e = ellipse_form(tau, wx, wy);
  return e < 1.0 ? (1.0 - e) / kPi : 0.0;
}

double snh_bulk_density(double tau, double wx, double wy) {
  require_strong_tau(tau);
  return ellipse_form(tau, wx, wy) < 1.0 ? 1.0 / (kPi * (1.0 - tau * tau)) : 0.0;
}

double snh_depletion_overlap(double tau, double delta, double xi) {
  require_strong_tau(tau);
  require(xi != 0.0, "snh_depletion_overlap: requires xi != 0");
  const double d = 1.0 - delta * delta / ((1.0 + tau) * (1.0 + tau));
  if (d <= 0.0) return 0.0;
  const double c = 1.0 - tau * tau;
  const double ax = std::abs(xi);
  const double u = std::sqrt(2.0 / c) * ax;
  const double bracket = 1.0 + std::sqrt(kPi * c / 2.0) * specfun::erfcx(u) / (2.0 * ax);
  return bracket * d / kPi;
}

double snh_depletion_density(double tau, double delta, double xi) {
  require_strong_tau(tau);
  const double d = 1.0 - delta * delta / ((1.0 + tau) * (1.0 + tau));
  if (d <= 0.0) return 0.0;
  const double c = 1.0 - tau * tau;
  const double ax = std::abs(xi);
  const double u = std::sqrt(2.0 / c) * ax;
  return std::sqrt(2.0 / kPi) / std::pow(c, 1.5) * ax * specfun::erfcx(u);
}

double wnh_tau(int n, double alpha) {
  require(n >= 1, "wnh_tau: N must be >= 1");
  return 1.0 - (kPi * alpha) * (kPi * alpha) / (2.0 * n);
}

ComplexPoint wnh_point(int n, double X, double y) {
  const double s = std::sqrt(static_cast<double>(n));
  return {s * X, kPi * y / s};
}

ComplexPoint snh_bulk_point(int n, double wx, double wy) {
  const double s = std::sqrt(static_cast<double>(n));
  return {s * wx, s * wy};
}

ComplexPoint depletion_point(int n, double delta, double xi) {
  return {std::sqrt(static_cast<double>(n)) * delta, xi};
}

double wnh_bulk_overlap_eginue(double alpha, double X, double y) {
  require(alpha > 0.0, "wnh_bulk_overlap_eginue: alpha must be > 0");
  if (std::abs(X) >= 2.0) return 0.0;
  const double U = upper_limit(X);
  const double I = cosh_integral(alpha, y, U, [&](double u) { return overlap_weight(alpha, U, u); });
  return std::sqrt(2.0) / std::pow(kPi, 1.5) / alpha * I;
}

double wnh_bulk_overlap_eginoe(double alpha, double X, double y) {
  require(alpha > 0.0, "wnh_bulk_overlap_eginoe: alpha must be > 0");
  require(y != 0.0, "wnh_bulk_overlap_eginoe: requires y != 0");
  if (std::abs(X) >= 2.0) return 0.0;
  const double U = upper_limit(X);
  const double ay = std::abs(y);
  const double v = std::sqrt(2.0) * ay / alpha;
  const double bracket = 1.0 + std::sqrt(kPi / 2.0) * alpha / (2.0 * ay) * specfun::erfcx(v);
  const double I = sinh_integral(alpha, ay, U, [&](double u) { return overlap_weight(alpha, U, u); });
  return 1.0 / (std::sqrt(2.0) * std::pow(kPi, 1.5)) * alpha / ay * bracket * I;
}

namespace {

// Real-ensemble density without the y != 0 guard; zero on the real axis.
double wnh_density_eginoe_total(double alpha, double X, double y) {
  if (std::abs(X) >= 2.0 || y == 0.0) return 0.0;
  const double U = upper_limit(X);
  const double ay = std::abs(y);
  const double v = std::sqrt(2.0) * ay / alpha;
  // erfc(v) = exp(-v^2) erfcx(v) and exp(-v^2) = exp(-2y^2/alpha^2) is folded
  // into sinh_integral.
  return specfun::erfcx(v) / kPi * sinh_integral(alpha, ay, U, [](double) { return 1.0; });
}

double wnh_density_eginue_total(double alpha, double X, double y) {
  if (std::abs(X) >= 2.0) return 0.0;
  const double U = upper_limit(X);
  return std::sqrt(2.0) / std::pow(kPi, 1.5) / alpha *
         cosh_integral(alpha, y, U, [](double) { return 1.0; });
}

double wnh_density_total(Ensemble e, double alpha, double X, double y) {
  return e == Ensemble::ComplexElliptic ? wnh_density_eginue_total(alpha, X, y)
                                        : wnh_density_eginoe_total(alpha, X, y);
}

}  // namespace

double wnh_density(Ensemble ensemble, double alpha, double X, double y) {
  require(alpha > 0.0, "wnh_density: alpha must be > 0");
  if (ensemble == Ensemble::RealElliptic) require(y != 0.0, "wnh_density (eGinOE): requires y != 0");
  return wnh_density_total(ensemble, alpha, X, y);
}

double wnh_conditional_norm(Ensemble ensemble, double alpha, Fixed fixed, double fixed_value) {
  require(alpha > 0.0, "wnh_conditional_norm: alpha must be > 0");
  const quad::Tolerance tol{1e-13, 1e-10, 4000};
  quad::Result r;
  if (fixed == Fixed::FixY) {
    r = quad::integrate([&](double X) { return wnh_density_total(ensemble, alpha, X, fixed_value); },
                        -2.0, 2.0, tol);
  } else {
    // Even in y; the tail is Gaussian on the scale alpha.
    r = quad::integrate_to_infinity(
        [&](double y) { return wnh_density_total(ensemble, alpha, fixed_value, y); }, 0.0,
        std::max(alpha, 0.5), tol, 1e-16);
    r.value *= 2.0;
  }
  if (!r.converged) throw NumericalError("wnh_conditional_norm: quadrature did not converge");
  return r.value;
}

double wnh_conditional_density(Ensemble ensemble, double alpha, Fixed fixed, double fixed_value,
                               double query) {
  const double norm = wnh_conditional_norm(ensemble, alpha, fixed, fixed_value);
  require(norm > 0.0, "wnh_conditional_density: normalising integral vanishes");
  const double X = fixed == Fixed::FixY ? query : fixed_value;
  const double y = fixed == Fixed::FixY ? fixed_value : query;
  return wnh_density_total(ensemble, alpha, X, y) / norm;
}

RegimeValue evaluate(const RegimeQuery& q) {
  q.validate();
  RegimeValue v;
  switch (q.regime) {
    case Regime::SnhBulk:
      v.overlap = snh_bulk_overlap(q.tau, q.a, q.b);
      v.density = snh_bulk_density(q.tau, q.a, q.b);
      break;
    case Regime::SnhDepletion:
      v.overlap = snh_depletion_overlap(q.tau, q.a, q.b);
      v.density = snh_depletion_density(q.tau, q.a, q.b);
      break;
    case Regime::WnhBulk:
      v.overlap = q.ensemble == Ensemble::ComplexElliptic ? wnh_bulk_overlap_eginue(q.alpha, q.a, q.b)
                                                          : wnh_bulk_overlap_eginoe(q.alpha, q.a, q.b);
      v.density = wnh_density(q.ensemble, q.alpha, q.a, q.b);
      break;
  }
  v.inside_support = v.density > 0.0;
  v.conditional = v.inside_support ? v.overlap / v.density : 0.0;
  return v;
}

// ---------------------------------------------------------------------------

double theta_times_exp(int n, int m, double s) {
  require(n - m >= 0, "theta_times_exp: need N - M >= 0");
  const double a = n * s;
  if (s >= 0.0) return specfun::theta_ratio(n, m, s) * std::exp(a);
  double term = 1.0, sum = 1.0;
  for (int k = 1; k <= n - m; ++k) {
    term *= a / k;
    sum += term;
  }
  return sum;
}

OracleResult integral_rep_oracle(OracleKind kind, int n, ComplexPoint z, double tau) {
  require(n >= 1 && n <= 14, "integral_rep_oracle: 1 <= n <= 14");
  require(tau > 0.0 && tau < 1.0, "integral_rep_oracle: tau must lie in (0, 1)");
  const bool pt = kind == OracleKind::P || kind == OracleKind::T;
  if (pt) require(z.y != 0.0, "integral_rep_oracle: P and T need y != 0");
  const int m_index = kind == OracleKind::P ? 0 : 1;
  const bool weighted = kind == OracleKind::R || kind == OracleKind::T;
  const double N = n;
  const double s2n = std::sqrt(2.0 * N);

  const auto f = [&](double p, double q) {
    const double s = 0.5 * (p * p - q * q);
    double v = theta_times_exp(n, m_index, s) *
               std::exp(-N * (p * p + q * q) / (2.0 * tau) - s2n * z.y * p / tau) *
               std::cos(s2n * z.x * q / tau);
    if (weighted) v *= N * s;
    if (pt) v *= p;
    return v;
  };

  // The p-profile is a Gaussian of variance tau/(N(1-tau)) centred at p*,
  // the q-profile lives within |q| <~ sqrt(2 tau) plus a few widths.
  const double p_star = -std::sqrt(2.0) * z.y / (std::sqrt(N) * (1.0 - tau));
  const double wp = 12.0 * std::sqrt(tau / (N * (1.0 - tau))) + std::sqrt(2.0 * tau) + 1.0;
  const double wq = std::sqrt(2.0 * tau) + 12.0 * std::sqrt(tau / N) + 1.0;
  const double p_lo = std::min(p_star, 0.0) - wp, p_hi = std::max(p_star, 0.0) + wp;

  double peak = 0.0;
  for (int i = 0; i <= 64; ++i) {
    for (int j = 0; j <= 64; ++j) {
      peak = std::max(peak, std::abs(f(p_lo + (p_hi - p_lo) * i / 64.0, wq * j / 64.0)));
    }
  }
  const double abs_tol = 1e-14 * std::max(peak, 1e-300) * (p_hi - p_lo) * wq;
  const quad::Tolerance outer{abs_tol, 1e-11, 2000};
  const quad::Tolerance inner{abs_tol / (p_hi - p_lo), 1e-12, 2000};
  // Integrand is even in q.
  const quad::Result r = quad::integrate_2d(f, p_lo, p_hi, 0.0, wq, outer, inner);

  double log_pre = 0.0, sign = 1.0;
  const double x2 = z.x * z.x, y2 = z.y * z.y;
  if (pt) {
    log_pre = std::log(N * s2n / (2.0 * std::abs(z.y)) / (2.0 * kPi * tau)) + (x2 - y2) / tau;
    sign = z.y > 0.0 ? -1.0 : 1.0;
  } else {
    const double c = 1.0 - tau * tau;
    log_pre = std::log(N / (2.0 * kPi * kPi * tau)) - 0.5 * std::log(c) -
              (x2 + y2 - tau * (x2 - y2)) / c + (x2 - y2) / tau;
  }
  OracleResult out;
  const double scale = 2.0 * sign * std::exp(log_pre);
  out.value = scale * r.value;
  out.error = std::abs(scale) * r.error;
  out.converged = r.converged;
  return out;
}

}  // namespace egin::asymptotics
