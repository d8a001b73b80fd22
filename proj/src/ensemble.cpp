#include "egin/ensemble.hpp"

#include "egin/errors.hpp"

namespace egin {

std::string_view ensemble_name(Ensemble e) {
  return e == Ensemble::ComplexElliptic ? "eginue" : "eginoe";
}

Ensemble parse_ensemble(std::string_view name) {
  if (name == "eginue") return Ensemble::ComplexElliptic;
  if (name == "eginoe") return Ensemble::RealElliptic;
  throw DomainError("unknown ensemble '" + std::string(name) + "' (expected eginue or eginoe)");
}

void EnsembleSpec::validate() const {
  require(n >= 2, "ensemble: matrix size N must be >= 2");
  require(tau >= 0.0 && tau <= 1.0, "ensemble: tau must lie in [0, 1]");
}

}  // namespace egin
