#pragma once

#include <functional>

namespace rdblow {

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  int intervals = 0;
  bool converged = false;
};

/// Globally adaptive Gauss-Kronrod (7/15) quadrature on [a, b]. Bisects the
/// interval with the largest error estimate until the summed estimate is
/// below abs_tol or max_intervals is reached.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol, int max_intervals = 4000);

}  // namespace rdblow
