#pragma once

#include <complex>
#include <string>
#include <string_view>

namespace egin {

enum class Ensemble { ComplexElliptic, RealElliptic };

std::string_view ensemble_name(Ensemble e);  // "eginue" / "eginoe"
Ensemble parse_ensemble(std::string_view name);

/// Which ensemble, matrix size N >= 2 and ellipticity tau in [0, 1].
struct EnsembleSpec {
  Ensemble kind = Ensemble::ComplexElliptic;
  int n = 2;
  double tau = 0.0;

  void validate() const;
};

/// A point z = x + iy of the spectral plane.
struct ComplexPoint {
  double x = 0.0;
  double y = 0.0;

  std::complex<double> z() const { return {x, y}; }
};

}  // namespace egin
