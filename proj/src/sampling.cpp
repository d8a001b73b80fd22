#include "egin/sampling.hpp"

#include <cmath>
#include <numbers>

#include "egin/errors.hpp"

namespace egin::sampling {

namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

Philox4x32::Block Philox4x32::bijection(Block c, std::array<std::uint32_t, 2> k) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kM0, c[0], hi0, lo0);
    mulhilo(kM1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kW0;
    k[1] += kW1;
  }
  return c;
}

Philox4x32::Block Philox4x32::next_block() {
  const std::uint64_t i = index_++;
  const Block counter = {static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32),
                         static_cast<std::uint32_t>(stream_.stream_id),
                         static_cast<std::uint32_t>(stream_.stream_id >> 32)};
  return bijection(counter, {static_cast<std::uint32_t>(stream_.seed),
                             static_cast<std::uint32_t>(stream_.seed >> 32)});
}

namespace {

inline double to_open_unit(std::uint32_t a, std::uint32_t b) {
  const std::uint64_t bits = (static_cast<std::uint64_t>(a >> 5) << 26) | (b >> 6);
  return (static_cast<double>(bits) + 0.5) * 0x1p-53;
}

}  // namespace

double GaussianStream::next_uniform() {
  if (has_pending_) {
    has_pending_ = false;
    return to_open_unit(pending_[0], pending_[1]);
  }
  const auto b = rng_.next_block();
  pending_[0] = b[2];
  pending_[1] = b[3];
  has_pending_ = true;
  return to_open_unit(b[0], b[1]);
}

double GaussianStream::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const auto b = rng_.next_block();
  const double u1 = to_open_unit(b[0], b[1]);
  const double u2 = to_open_unit(b[2], b[3]);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

Eigen::MatrixXcd MatrixSample::as_complex() const {
  return is_real() ? Eigen::MatrixXcd(real.cast<std::complex<double>>()) : complex;
}

namespace {

// Hermitian Gaussian with diagonal variance 1/2 and off-diagonal real and
// imaginary parts of variance 1/4.
Eigen::MatrixXcd hermitian_gaussian(int n, GaussianStream& g) {
  Eigen::MatrixXcd h(n, n);
  const double sd_diag = std::sqrt(0.5), sd_off = 0.5;
  for (int j = 0; j < n; ++j) {
    h(j, j) = {sd_diag * g.next(), 0.0};
    for (int i = j + 1; i < n; ++i) {
      const double re = sd_off * g.next();
      const double im = sd_off * g.next();
      h(i, j) = {re, im};
      h(j, i) = {re, -im};
    }
  }
  return h;
}

}  // namespace

MatrixSample sample_eginue(const EnsembleSpec& spec, GaussianStream& g) {
  spec.validate();
  require(spec.kind == Ensemble::ComplexElliptic, "sample_eginue: spec must be eGinUE");
  const int n = spec.n;
  const Eigen::MatrixXcd h1 = hermitian_gaussian(n, g);
  const Eigen::MatrixXcd h2 = hermitian_gaussian(n, g);
  const double a = std::sqrt(1.0 + spec.tau), b = std::sqrt(1.0 - spec.tau);
  MatrixSample m;
  m.spec = spec;
  m.complex.resize(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      // a h1 + i b h2, written out so that b = 0 leaves a h1 bit-for-bit.
      const std::complex<double> u = h1(i, j), v = h2(i, j);
      m.complex(i, j) = {a * u.real() - b * v.imag(), a * u.imag() + b * v.real()};
    }
  }
  return m;
}

MatrixSample sample_eginoe(const EnsembleSpec& spec, GaussianStream& g) {
  spec.validate();
  require(spec.kind == Ensemble::RealElliptic, "sample_eginoe: spec must be eGinOE");
  const int n = spec.n;
  const double a = std::sqrt(1.0 + spec.tau), b = std::sqrt(1.0 - spec.tau);
  const double sd_off = std::sqrt(0.5);
  MatrixSample m;
  m.spec = spec;
  m.real.resize(n, n);
  for (int j = 0; j < n; ++j) {
    m.real(j, j) = a * g.next();
    for (int i = j + 1; i < n; ++i) {
      const double h = a * sd_off * g.next();
      const double s = b * sd_off * g.next();
      m.real(i, j) = h + s;
      m.real(j, i) = h - s;
    }
  }
  return m;
}

MatrixSample sample(const EnsembleSpec& spec, GaussianStream& g) {
  return spec.kind == Ensemble::ComplexElliptic ? sample_eginue(spec, g) : sample_eginoe(spec, g);
}

double log_jpdf(const MatrixSample& m, double tau) {
  require(tau >= 0.0 && tau < 1.0, "log_jpdf: tau must lie in [0, 1)");
  const double c = 1.0 - tau * tau;
  const double pi = std::numbers::pi;
  const int n = m.spec.n;
  const double nn = static_cast<double>(n) * n;
  if (m.is_real()) {
    const Eigen::MatrixXd& x = m.real;
    const double tr = x.squaredNorm() - tau * (x * x).trace();
    const double log_z = 0.5 * n * std::log(2.0 * pi * (1.0 + tau)) +
                         0.5 * n * (n - 1) * std::log(2.0 * pi * std::sqrt(c));
    return -log_z - tr / (2.0 * c);
  }
  const Eigen::MatrixXcd& x = m.complex;
  const double tr = x.squaredNorm() - tau * (x * x).trace().real();
  return -nn * std::log(pi) - 0.5 * nn * std::log(c) - tr / c;
}

}  // namespace egin::sampling
