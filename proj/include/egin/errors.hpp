#pragma once

#include <stdexcept>
#include <string>

namespace egin {

/// Violated precondition (bad τ, y = 0 on the real ensemble, N out of range...).
/// The CLI maps this to exit code 2.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Numerical failure: non-convergent quadrature, eigensolver breakdown.
/// The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

}  // namespace egin
