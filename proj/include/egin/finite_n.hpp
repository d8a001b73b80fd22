#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "egin/ensemble.hpp"
#include "egin/scaled_value.hpp"

// Exact finite-N mean density of complex eigenvalues and mean self-overlap
// for the complex (eGinUE) and real (eGinOE) elliptic Ginibre ensembles.
//
// Every quantity here is a non-negatively weighted sum over the Hermite pair
// terms t_m = tau^m/m! |He_m(z/sqrt(tau))|^2 times a closed-form prefactor, so
// no evaluation path subtracts large numbers. Sums are accumulated as
// ScaledValue and the prefactor exponent is added in log space before a single
// final exponentiation.
//
// Densities are returned exactly as the closed forms define them: the eGinUE
// density integrates to N over the plane (not to 1). Conditional means are
// ratios, so the convention cancels there.

namespace egin::finite_n {

/// Densities below this are reported as underflow; the conditional is then flagged.
inline constexpr double kUnderflowFloor = 1e-300;
/// Below this tau the closed-form tau -> 0 (Ginibre) pair terms are used.
inline constexpr double kTauZeroSwitch = 1e-8;

struct FiniteNResult {
  double density = 0.0;
  double overlap = 0.0;
  std::optional<double> conditional;  // empty on density underflow
  double log_density = 0.0;
  double log_overlap = 0.0;

  bool density_underflow() const { return !conditional.has_value(); }
};

// --- weights over the pair terms t_0..t_{K-1} -------------------------------

std::vector<double> density_weights(int n);             // rho_n: 1 for m < n
std::vector<double> r_weights(int order);               // R_order: m
std::vector<double> p_weights(int order, double tau);   // P_order
std::vector<double> t_weights(int order, double tau);   // T_order
/// P_{N-2} + (1-tau^2)(P_{N-3} + (N-3)P_{N-4} - T_{N-4}), the eGinOE bracket.
std::vector<double> eginoe_overlap_weights(int n, double tau);
/// [rho_N + (1-tau^2)(rho_{N-1} + (N-2) rho_{N-2} - R_{N-3})] / prefactor.
std::vector<double> eginue_overlap_weights(int n, double tau);

/// Closed-form tau = 0 pair terms |z|^{2m}/m!, m = 0..K.
std::vector<ScaledValue> limit_pair_terms(int K, std::complex<double> z);

/// sum_m weights[m] t_m(z; tau); switches to limit_pair_terms below kTauZeroSwitch.
ScaledValue weighted_pair_sum(std::complex<double> z, double tau, std::span<const double> weights);

/// log of (1/pi)(1-tau^2)^{-1/2} exp[-(|z|^2 - tau Re z^2)/(1-tau^2)].
double log_eginue_prefactor(ComplexPoint z, double tau);

// --- building blocks -------------------------------------------------------

ScaledValue p_n_scaled(int order, ComplexPoint z, double tau);
ScaledValue t_n_scaled(int order, ComplexPoint z, double tau);
double p_n(int order, ComplexPoint z, double tau);
double t_n(int order, ComplexPoint z, double tau);
/// R_order including its exponential prefactor. order >= -1; negative orders give 0.
double r_n(int order, ComplexPoint z, double tau);

/// Antisymmetric-difference forms of P_n and T_n, evaluated literally from
/// He_k(z/sqrt(tau)) and He_k(conj(z)/sqrt(tau)). Needs y != 0. Cross-check path.
ScaledValue p_n_difference_form(int order, ComplexPoint z, double tau);
ScaledValue t_n_difference_form(int order, ComplexPoint z, double tau);

// --- densities, overlaps, conditional means ---------------------------------

/// rho_n of the eGinUE for any n >= 0 (rho_0 = 0); tau in [0, 1).
double density_eginue(int n, ComplexPoint z, double tau);
double log_density_eginue(int n, ComplexPoint z, double tau);
double density_eginue(const EnsembleSpec& spec, ComplexPoint z);

/// Complex-eigenvalue density of the eGinOE, even in y. Needs y != 0, tau < 1.
double density_eginoe_complex(const EnsembleSpec& spec, ComplexPoint z);
double log_density_eginoe_complex(const EnsembleSpec& spec, ComplexPoint z);

double overlap_eginue(const EnsembleSpec& spec, ComplexPoint z);
double log_overlap_eginue(const EnsembleSpec& spec, ComplexPoint z);
double overlap_eginoe(const EnsembleSpec& spec, ComplexPoint z);
double log_overlap_eginoe(const EnsembleSpec& spec, ComplexPoint z);

/// Density, overlap and conditional mean O/rho at one point.
FiniteNResult evaluate(const EnsembleSpec& spec, ComplexPoint z);

/// O(z)/rho(z); empty when the density is below kUnderflowFloor.
std::optional<double> conditional_mean(const EnsembleSpec& spec, ComplexPoint z);

/// evaluate() over many points through the vectorized pair-sum kernel.
std::vector<FiniteNResult> evaluate_batch(const EnsembleSpec& spec,
                                          std::span<const ComplexPoint> points);

}  // namespace egin::finite_n
