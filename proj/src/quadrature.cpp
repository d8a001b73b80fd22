#include "egin/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace egin::quad {

namespace {

// Kronrod 15-point nodes on [0, 1] (symmetric), with the embedded 7-point Gauss weights.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(center - dx), f2 = f(center + dx);
    kronrod += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

Result integrate(const std::function<double(double)>& f, double a, double b, Tolerance tol) {
  Result r;
  if (a == b) {
    r.converged = true;
    return r;
  }
  std::priority_queue<Panel> panels;
  Panel first = gk15(f, a, b);
  panels.push(first);
  double value = first.value, error = first.error;
  int count = 1;
  while (error > std::max(tol.abs, tol.rel * std::abs(value)) && count < tol.max_panels) {
    const Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Panel left = gk15(f, worst.a, mid), right = gk15(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    ++count;
  }
  // Re-sum to shed the drift of the incremental updates.
  value = 0.0;
  error = 0.0;
  while (!panels.empty()) {
    value += panels.top().value;
    error += panels.top().error;
    panels.pop();
  }
  r.value = value;
  r.error = error;
  r.panels = count;
  r.converged = error <= std::max(tol.abs, tol.rel * std::abs(value));
  return r;
}

Result integrate_to_infinity(const std::function<double(double)>& f, double a, double step,
                             Tolerance tol, double tail_cut) {
  Result total;
  total.converged = true;
  double lo = a;
  for (int i = 0; i < 200; ++i) {
    const double hi = lo + step;
    const Result piece = integrate(f, lo, hi, tol);
    total.value += piece.value;
    total.error += piece.error;
    total.panels += piece.panels;
    total.converged = total.converged && piece.converged;
    if (std::abs(piece.value) <= tail_cut * std::abs(total.value) && i > 0) return total;
    lo = hi;
    step *= 2.0;
  }
  total.converged = false;
  return total;
}

Result integrate_2d(const std::function<double(double, double)>& f, double ax, double bx,
                    double ay, double by, Tolerance outer, Tolerance inner) {
  bool inner_ok = true;
  const auto slice = [&](double x) {
    const Result r = integrate([&](double y) { return f(x, y); }, ay, by, inner);
    inner_ok = inner_ok && r.converged;
    return r.value;
  };
  Result r = integrate(slice, ax, bx, outer);
  r.converged = r.converged && inner_ok;
  return r;
}

}  // namespace egin::quad
