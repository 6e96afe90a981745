#pragma once

#include <functional>
#include <vector>

namespace cekm {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};

// Adaptive Gauss-Kronrod (G7, K15) integration of f over [a, b]. The worst
// interval (largest error estimate) is bisected until the accumulated error
// drops below max(abs_tol, rel_tol * |value|). Known discontinuities or kinks
// can be passed as initial breakpoints. Throws NumericError when the interval
// budget is exhausted before the tolerance is met.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol, double rel_tol,
                                    const std::vector<double>& breakpoints = {},
                                    int max_intervals = 4000);

}  // namespace cekm
