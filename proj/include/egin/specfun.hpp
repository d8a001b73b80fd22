#pragma once

#include <complex>
#include <vector>

#include "egin/scaled_value.hpp"

namespace egin::specfun {

/// Monic (probabilists') Hermite polynomial He_k(x) by the three-term
/// recurrence He_{k+1} = x He_k - k He_{k-1}.
std::complex<double> hermite_he(int k, std::complex<double> x);

/// Terms t_k = tau^k / k! * He_k(z/sqrt(tau)) * He_k(conj(z)/sqrt(tau)),
/// k = 0..K. Requires 0 < tau <= 1.
std::vector<ScaledValue> hermite_pair_sequence(int K, std::complex<double> z, double tau);

/// Same terms without the tau > 0 restriction. The recurrence runs on
/// g_k = tau^{k/2} He_k(z/sqrt(tau)) / sqrt(k!), which is a polynomial in
/// (z, tau) and reduces to z^k / sqrt(k!) at tau = 0.
std::vector<ScaledValue> pair_terms(int K, std::complex<double> z, double tau);

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a),
/// a > 0, x >= 0. Series below the pivot x < a + 1, Lentz continued fraction
/// above it.
double gamma_q(double a, double x);

/// Theta_N^{(M)}(x) = Gamma(N-M+1, N x) / Gamma(N-M+1).
double theta_ratio(int n, int m, double x);

double erfc(double x);

/// Scaled complementary error function exp(x^2) erfc(x).
double erfcx(double x);

/// log(exp(a) + exp(b)) without overflow.
double log_add(double a, double b);

}  // namespace egin::specfun
