#pragma once

#include <functional>

namespace egin::quad {

struct Tolerance {
  double abs = 1e-10;
  double rel = 1e-8;
  int max_panels = 4000;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  int panels = 0;
  bool converged = false;
};

/// Adaptive Gauss-Kronrod (7-15) on [a, b]: bisects the panel with the largest
/// error estimate until the summed estimate meets max(abs, rel*|I|).
Result integrate(const std::function<double(double)>& f, double a, double b, Tolerance tol = {});

/// Integral over [a, inf) of a function with decaying tail. Integrates
/// consecutive panels of width `step` (doubling) until a panel contributes
/// less than `tail_cut` of the running total.
Result integrate_to_infinity(const std::function<double(double)>& f, double a, double step,
                             Tolerance tol = {}, double tail_cut = 1e-16);

/// Nested 2-D integral over [ax, bx] x [ay(x), by(x)] rectangle.
Result integrate_2d(const std::function<double(double, double)>& f, double ax, double bx,
                    double ay, double by, Tolerance outer = {}, Tolerance inner = {});

}  // namespace egin::quad
