#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace egin {

// A complex number carried as mantissa * exp(log_scale). The mantissa is kept
// inside [kLow, kHigh] in magnitude (or is exactly zero, with log_scale = 0);
// renormalization shifts by powers of two so the mantissa itself is exact.
class ScaledValue {
public:
  static constexpr double kLow = 1e-8;
  static constexpr double kHigh = 1e8;

  constexpr ScaledValue() = default;
  ScaledValue(std::complex<double> mantissa, double log_scale = 0.0)
      : mantissa_(mantissa), log_scale_(log_scale) {
    normalize();
  }

  static ScaledValue from_log(double log_magnitude) {
    if (log_magnitude == -std::numeric_limits<double>::infinity()) return {};
    return ScaledValue(1.0, log_magnitude);
  }

  std::complex<double> mantissa() const { return mantissa_; }
  double log_scale() const { return log_scale_; }
  bool is_zero() const { return mantissa_ == std::complex<double>(0.0, 0.0); }

  /// Natural log of |value|; -inf for zero.
  double log_abs() const {
    if (is_zero()) return -std::numeric_limits<double>::infinity();
    return std::log(std::abs(mantissa_)) + log_scale_;
  }

  /// The plain value; overflows to inf / underflows to 0 like any double would.
  std::complex<double> value() const {
    if (is_zero()) return {0.0, 0.0};
    return mantissa_ * std::exp(log_scale_);
  }
  double real() const { return value().real(); }

  void normalize() {
    const double mag = std::abs(mantissa_);
    if (mag == 0.0) {
      mantissa_ = {0.0, 0.0};
      log_scale_ = 0.0;
      return;
    }
    if (mag >= kLow && mag <= kHigh) return;
    const int e = std::ilogb(mag);
    mantissa_ = {std::ldexp(mantissa_.real(), -e), std::ldexp(mantissa_.imag(), -e)};
    log_scale_ += e * std::numbers::ln2;
  }

  ScaledValue& operator*=(const ScaledValue& o) {
    mantissa_ *= o.mantissa_;
    log_scale_ += o.log_scale_;
    normalize();
    return *this;
  }

  ScaledValue& operator*=(std::complex<double> c) {
    mantissa_ *= c;
    normalize();
    return *this;
  }

  ScaledValue& operator+=(const ScaledValue& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    if (o.log_scale_ > log_scale_) {
      mantissa_ = o.mantissa_ + mantissa_ * std::exp(log_scale_ - o.log_scale_);
      log_scale_ = o.log_scale_;
    } else {
      mantissa_ += o.mantissa_ * std::exp(o.log_scale_ - log_scale_);
    }
    normalize();
    return *this;
  }

  friend ScaledValue operator*(ScaledValue a, const ScaledValue& b) { return a *= b; }
  friend ScaledValue operator+(ScaledValue a, const ScaledValue& b) { return a += b; }

private:
  std::complex<double> mantissa_{0.0, 0.0};
  double log_scale_ = 0.0;
};

}  // namespace egin
