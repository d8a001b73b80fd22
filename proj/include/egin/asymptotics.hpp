#pragma once

#include "egin/ensemble.hpp"

// Large-N limits of the mean self-overlap and complex-eigenvalue density, and
// the double-integral representations of the finite-N building blocks used as
// independent quadrature oracles.
//
// Scalings:
//   strong non-Hermiticity bulk       z = sqrt(N) w,                 w = w_x + i w_y
//   strong non-Hermiticity depletion  z = sqrt(N) delta + i xi        (eGinOE)
//   weak non-Hermiticity              z = sqrt(N) X + i pi y / sqrt(N),
//                                     tau = 1 - (pi alpha)^2 / (2N)
// Overlaps are returned as O_N / N (strong) or pi^2 O_N / N (weak); densities
// likewise as rho_N (strong) or pi^2 rho_N / N (weak).

namespace egin::asymptotics {

enum class Regime { SnhBulk, SnhDepletion, WnhBulk };

/// Regime selector with the regime's scaled coordinates.
/// SnhBulk: (a, b) = (w_x, w_y); SnhDepletion: (delta, xi); WnhBulk: (X, y).
struct RegimeQuery {
  Regime regime = Regime::SnhBulk;
  Ensemble ensemble = Ensemble::ComplexElliptic;
  double tau = 0.0;    // strong regimes
  double alpha = 1.0;  // weak regime
  double a = 0.0;
  double b = 0.0;

  void validate() const;
};

struct RegimeValue {
  double overlap = 0.0;
  double density = 0.0;
  double conditional = 0.0;  // overlap / density; 0 outside the support
  bool inside_support = false;
};

/// Overlap, density and their ratio for a regime query. In the strong regimes
/// the finite-N conditional mean is approximately N * conditional; in the weak
/// regime it is approximately conditional itself.
RegimeValue evaluate(const RegimeQuery& q);

// --- strong non-Hermiticity ------------------------------------------------

double snh_bulk_overlap(double tau, double wx, double wy);
double snh_bulk_density(double tau, double wx, double wy);
double snh_depletion_overlap(double tau, double delta, double xi);
double snh_depletion_density(double tau, double delta, double xi);

// --- weak non-Hermiticity ----------------------------------------------------

double wnh_tau(int n, double alpha);
ComplexPoint wnh_point(int n, double X, double y);
ComplexPoint snh_bulk_point(int n, double wx, double wy);
ComplexPoint depletion_point(int n, double delta, double xi);

double wnh_bulk_overlap_eginue(double alpha, double X, double y);
double wnh_bulk_overlap_eginoe(double alpha, double X, double y);
double wnh_density(Ensemble ensemble, double alpha, double X, double y);

enum class Fixed { FixX, FixY };

/// Density normalised along one line: for FixY the integral over X in [-2, 2]
/// at y = fixed_value, for FixX the integral over all y at X = fixed_value.
double wnh_conditional_density(Ensemble ensemble, double alpha, Fixed fixed, double fixed_value,
                               double query);
/// The normalising integral itself.
double wnh_conditional_norm(Ensemble ensemble, double alpha, Fixed fixed, double fixed_value);

// --- integral-representation oracles ---------------------------------------

enum class OracleKind { DensityEgUE, R, P, T };

struct OracleResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = false;
};

/// Finite-N rho_N, R_N, P_N or T_N from their (p, q) double-integral
/// representations by nested adaptive quadrature. n <= 14, 0 < tau < 1,
/// y != 0 for P and T.
OracleResult integral_rep_oracle(OracleKind kind, int n, ComplexPoint z, double tau);

/// Theta_N^{(M)}(s) exp(N s) = sum_{k<=N-M} (N s)^k / k!, valid for any real s.
double theta_times_exp(int n, int m, double s);

}  // namespace egin::asymptotics
