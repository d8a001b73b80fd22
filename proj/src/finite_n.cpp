#include "egin/finite_n.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "egin/errors.hpp"
#include "egin/kernels.hpp"
#include "egin/specfun.hpp"

namespace egin::finite_n {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLogFloor = -690.7755278982137;  // log(1e-300)

void require_open_tau(double tau, const char* who) {
  require(tau > 0.0 && tau < 1.0, std::string(who) + ": tau must lie in (0, 1)");
}

void require_tau_below_one(double tau, const char* who) {
  require(tau >= 0.0 && tau < 1.0, std::string(who) + ": tau must lie in [0, 1)");
}

double exp_or_zero(double log_value) { return log_value == kNegInf ? 0.0 : std::exp(log_value); }

// u = sqrt(2/(1-tau^2)) |y|, the erfc argument shared by the eGinOE formulas.
double erfc_argument(double y, double tau) { return std::sqrt(2.0 / (1.0 - tau * tau)) * std::abs(y); }

}  // namespace

std::vector<double> density_weights(int n) {
  return std::vector<double>(static_cast<std::size_t>(std::max(n, 0)), 1.0);
}

std::vector<double> r_weights(int order) {
  if (order < 0) return {};
  std::vector<double> w(static_cast<std::size_t>(order) + 1);
  for (int m = 0; m <= order; ++m) w[m] = m;
  return w;
}

// P_n = sum_{k<=n} tau^k S_k with S_k = sum_{m<=k} t_m tau^{-m}, so t_m carries
// W_m = sum_{k=m}^{n} tau^{k-m}. Horner from the top keeps every W_m exact-ish.
std::vector<double> p_weights(int order, double tau) {
  if (order < 0) return {};
  std::vector<double> w(static_cast<std::size_t>(order) + 1);
  double acc = 0.0;
  for (int m = order; m >= 0; --m) w[m] = acc = 1.0 + tau * acc;
  return w;
}

std::vector<double> t_weights(int order, double tau) {
  if (order < 0) return {};
  std::vector<double> w(static_cast<std::size_t>(order) + 1);
  double acc = 0.0;
  for (int m = order; m >= 0; --m) w[m] = acc = m + tau * acc;
  return w;
}

std::vector<double> eginoe_overlap_weights(int n, double tau) {
  require(n >= 2, "eginoe_overlap_weights: N must be >= 2");
  const double c = 1.0 - tau * tau;
  std::vector<double> w = p_weights(n - 2, tau);
  const std::vector<double> p3 = p_weights(n - 3, tau);
  for (std::size_t m = 0; m < p3.size(); ++m) w[m] += c * p3[m];
  // (N-3) P_{N-4} - T_{N-4} = sum_{k<=N-4} (N-3-k) tau^k S_k: non-negative weights.
  const int top = n - 4;
  double acc = 0.0;
  for (int m = top; m >= 0; --m) {
    acc = (top + 1 - m) + tau * acc;
    w[m] += c * acc;
  }
  return w;
}

std::vector<double> eginue_overlap_weights(int n, double tau) {
  require(n >= 2, "eginue_overlap_weights: N must be >= 2");
  const double c = 1.0 - tau * tau;
  std::vector<double> w(static_cast<std::size_t>(n), 1.0);
  for (int m = 0; m < n - 1; ++m) w[m] += c;
  // (N-2) rho_{N-2} - R_{N-3} = prefactor * sum_{m<=N-3} (N-2-m) t_m
  for (int m = 0; m <= n - 3; ++m) w[m] += c * (n - 2 - m);
  return w;
}

std::vector<ScaledValue> limit_pair_terms(int K, std::complex<double> z) {
  require(K >= 0, "limit_pair_terms: K must be non-negative");
  std::vector<ScaledValue> out;
  out.reserve(static_cast<std::size_t>(K) + 1);
  out.emplace_back(1.0, 0.0);
  const double r2 = std::norm(z);
  const double log_r2 = r2 > 0.0 ? std::log(r2) : kNegInf;
  for (int m = 1; m <= K; ++m) {
    if (r2 == 0.0) {
      out.emplace_back();
    } else {
      out.push_back(ScaledValue::from_log(m * log_r2 - std::lgamma(m + 1.0)));
    }
  }
  return out;
}

ScaledValue weighted_pair_sum(std::complex<double> z, double tau, std::span<const double> weights) {
  if (weights.empty()) return {};
  const int K = static_cast<int>(weights.size()) - 1;
  const std::vector<ScaledValue> terms =
      tau < kTauZeroSwitch ? limit_pair_terms(K, z) : specfun::pair_terms(K, z, tau);
  ScaledValue sum;
  for (int m = 0; m <= K; ++m) {
    if (weights[m] == 0.0) continue;
    ScaledValue term = terms[m];
    term *= std::complex<double>(weights[m], 0.0);
    sum += term;
  }
  return sum;
}

double log_eginue_prefactor(ComplexPoint z, double tau) {
  const double x2 = z.x * z.x, y2 = z.y * z.y;
  const double c = 1.0 - tau * tau;
  return -std::log(std::numbers::pi) - 0.5 * std::log(c) - (x2 + y2 - tau * (x2 - y2)) / c;
}

ScaledValue p_n_scaled(int order, ComplexPoint z, double tau) {
  require_open_tau(tau, "p_n");
  return weighted_pair_sum(z.z(), tau, p_weights(order, tau));
}

ScaledValue t_n_scaled(int order, ComplexPoint z, double tau) {
  require_open_tau(tau, "t_n");
  return weighted_pair_sum(z.z(), tau, t_weights(order, tau));
}

double p_n(int order, ComplexPoint z, double tau) { return p_n_scaled(order, z, tau).real(); }
double t_n(int order, ComplexPoint z, double tau) { return t_n_scaled(order, z, tau).real(); }

double r_n(int order, ComplexPoint z, double tau) {
  require_open_tau(tau, "r_n");
  require(order >= -1, "r_n: order must be >= -1");
  const ScaledValue s = weighted_pair_sum(z.z(), tau, r_weights(order));
  if (s.is_zero()) return 0.0;
  return std::exp(s.log_abs() + log_eginue_prefactor(z, tau));
}

namespace {

// He_k(x) for k = 0..K with a shared exponent, as ScaledValues.
std::vector<ScaledValue> hermite_sequence(int K, std::complex<double> x) {
  std::vector<ScaledValue> out;
  out.reserve(static_cast<std::size_t>(K) + 1);
  std::complex<double> prev{1.0, 0.0}, cur = x;
  double log_scale = 0.0;
  out.emplace_back(prev, 0.0);
  if (K >= 1) out.emplace_back(cur, 0.0);
  for (int k = 1; k < K; ++k) {
    const std::complex<double> next = x * cur - static_cast<double>(k) * prev;
    prev = cur;
    cur = next;
    const double mag = std::abs(cur);
    if (mag > 0x1p300 || (mag != 0.0 && mag < 0x1p-300)) {
      const int e = std::ilogb(mag);
      cur = {std::ldexp(cur.real(), -e), std::ldexp(cur.imag(), -e)};
      prev = {std::ldexp(prev.real(), -e), std::ldexp(prev.imag(), -e)};
      log_scale += e * std::numbers::ln2;
    }
    out.emplace_back(cur, log_scale);
  }
  return out;
}

// (1/(zbar - z)) sum_k weight(k) tau^{k+1/2}/k! [He_{k+1}(zb') He_k(z') - He_{k+1}(z') He_k(zb')]
template <class Weight>
ScaledValue difference_form(int order, ComplexPoint z, double tau, Weight weight) {
  require_open_tau(tau, "difference form");
  require(z.y != 0.0, "difference form: requires y != 0");
  if (order < 0) return {};
  const double st = std::sqrt(tau);
  const std::complex<double> zz = z.z();
  const auto he = hermite_sequence(order + 1, zz / st);
  const auto hb = hermite_sequence(order + 1, std::conj(zz) / st);
  ScaledValue sum;
  for (int k = 0; k <= order; ++k) {
    const double w = weight(k);
    if (w == 0.0) continue;
    ScaledValue bracket = hb[k + 1] * he[k];
    ScaledValue minus = he[k + 1] * hb[k];
    minus *= std::complex<double>(-1.0, 0.0);
    bracket += minus;
    bracket *= ScaledValue(w, (k + 0.5) * std::log(tau) - std::lgamma(k + 1.0));
    sum += bracket;
  }
  sum *= 1.0 / (std::conj(zz) - zz);
  return sum;
}

}  // namespace

ScaledValue p_n_difference_form(int order, ComplexPoint z, double tau) {
  return difference_form(order, z, tau, [](int) { return 1.0; });
}

ScaledValue t_n_difference_form(int order, ComplexPoint z, double tau) {
  return difference_form(order, z, tau, [](int k) { return static_cast<double>(k); });
}

namespace {

// log of the x/y prefactor and the erfc bracket of the eGinOE overlap.
double log_eginoe_overlap_prefactor(ComplexPoint z, double tau) {
  const double ay = std::abs(z.y);
  const double u = erfc_argument(ay, tau);
  const double bracket =
      1.0 + std::sqrt(std::numbers::pi * (1.0 - tau * tau) / 2.0) * specfun::erfcx(u) / (2.0 * ay);
  return -std::log(std::numbers::pi) + 0.5 * std::log((1.0 - tau) / (1.0 + tau)) -
         z.x * z.x / (1.0 + tau) - ay * ay / (1.0 - tau) + std::log(bracket);
}

double log_eginoe_density_prefactor(ComplexPoint z, double tau) {
  const double ay = std::abs(z.y);
  const double u = erfc_argument(ay, tau);
  return 0.5 * std::log(2.0 / std::numbers::pi) - std::log1p(tau) + std::log(ay) +
         (ay * ay - z.x * z.x) / (1.0 + tau) + std::log(specfun::erfcx(u)) - u * u;
}

}  // namespace

double log_density_eginue(int n, ComplexPoint z, double tau) {
  require_tau_below_one(tau, "density_eginue");
  require(n >= 0, "density_eginue: N must be >= 0");
  const ScaledValue s = weighted_pair_sum(z.z(), tau, density_weights(n));
  if (s.is_zero()) return kNegInf;
  return s.log_abs() + log_eginue_prefactor(z, tau);
}

double density_eginue(int n, ComplexPoint z, double tau) {
  return exp_or_zero(log_density_eginue(n, z, tau));
}

double density_eginue(const EnsembleSpec& spec, ComplexPoint z) {
  spec.validate();
  return density_eginue(spec.n, z, spec.tau);
}

double log_density_eginoe_complex(const EnsembleSpec& spec, ComplexPoint z) {
  spec.validate();
  require_tau_below_one(spec.tau, "density_eginoe_complex");
  require(z.y != 0.0, "density_eginoe_complex: requires y != 0 (complex eigenvalues only)");
  const ScaledValue p = weighted_pair_sum(z.z(), spec.tau, p_weights(spec.n - 2, spec.tau));
  return log_eginoe_density_prefactor(z, spec.tau) + p.log_abs();
}

double density_eginoe_complex(const EnsembleSpec& spec, ComplexPoint z) {
  return exp_or_zero(log_density_eginoe_complex(spec, z));
}

double log_overlap_eginue(const EnsembleSpec& spec, ComplexPoint z) {
  spec.validate();
  require_tau_below_one(spec.tau, "overlap_eginue");
  const ScaledValue s = weighted_pair_sum(z.z(), spec.tau, eginue_overlap_weights(spec.n, spec.tau));
  return s.log_abs() + log_eginue_prefactor(z, spec.tau);
}

double overlap_eginue(const EnsembleSpec& spec, ComplexPoint z) {
  return exp_or_zero(log_overlap_eginue(spec, z));
}


double log_overlap_eginoe(const EnsembleSpec& spec, ComplexPoint z) {
  spec.validate();
  require_tau_below_one(spec.tau, "overlap_eginoe");
  require(z.y != 0.0, "overlap_eginoe: requires y != 0 (complex eigenvalues only)");
  const ScaledValue s = weighted_pair_sum(z.z(), spec.tau, eginoe_overlap_weights(spec.n, spec.tau));
  return log_eginoe_overlap_prefactor(z, spec.tau) + s.log_abs();
}

double overlap_eginoe(const EnsembleSpec& spec, ComplexPoint z) {
  return exp_or_zero(log_overlap_eginoe(spec, z));
}

namespace {

FiniteNResult make_result(double log_density, double log_overlap) {
  FiniteNResult r;
  r.log_density = log_density;
  r.log_overlap = log_overlap;
  r.density = exp_or_zero(log_density);
  r.overlap = exp_or_zero(log_overlap);
  if (log_density > kLogFloor) r.conditional = std::exp(log_overlap - log_density);
  return r;
}

}  // namespace

FiniteNResult evaluate(const EnsembleSpec& spec, ComplexPoint z) {
  if (spec.kind == Ensemble::ComplexElliptic) {
    return make_result(log_density_eginue(spec.n, z, spec.tau), log_overlap_eginue(spec, z));
  }
  return make_result(log_density_eginoe_complex(spec, z), log_overlap_eginoe(spec, z));
}

std::optional<double> conditional_mean(const EnsembleSpec& spec, ComplexPoint z) {
  return evaluate(spec, z).conditional;
}

std::vector<FiniteNResult> evaluate_batch(const EnsembleSpec& spec,
                                          std::span<const ComplexPoint> points) {
  spec.validate();
  require_tau_below_one(spec.tau, "evaluate_batch");
  const bool complex_ens = spec.kind == Ensemble::ComplexElliptic;
  std::vector<double> xs, ys;
  xs.reserve(points.size());
  ys.reserve(points.size());
  for (const auto& p : points) {
    if (!complex_ens) require(p.y != 0.0, "evaluate_batch: eGinOE points need y != 0");
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  std::vector<double> wd = complex_ens ? density_weights(spec.n) : p_weights(spec.n - 2, spec.tau);
  std::vector<double> wo = complex_ens ? eginue_overlap_weights(spec.n, spec.tau)
                                       : eginoe_overlap_weights(spec.n, spec.tau);
  const std::size_t K = std::max(wd.size(), wo.size());
  wd.resize(K, 0.0);
  wo.resize(K, 0.0);
  std::vector<double> weights(wd);
  weights.insert(weights.end(), wo.begin(), wo.end());
  std::vector<double> logs(2 * points.size());
  const double tau = spec.tau < kTauZeroSwitch ? 0.0 : spec.tau;
  kernels::pair_sums({xs, ys, tau, weights, K, logs});

  std::vector<FiniteNResult> out;
  out.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double ld = logs[i], lo = logs[points.size() + i];
    if (complex_ens) {
      const double pre = log_eginue_prefactor(points[i], spec.tau);
      out.push_back(make_result(ld + pre, lo + pre));
    } else {
      out.push_back(make_result(ld + log_eginoe_density_prefactor(points[i], spec.tau),
                                lo + log_eginoe_overlap_prefactor(points[i], spec.tau)));
    }
  }
  return out;
}

}  // namespace egin::finite_n
