#pragma once

#include <functional>

namespace slcone {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  int intervals = 0;
};

// Globally adaptive 31-point Gauss-Kronrod: the panel with the largest error
// estimate is bisected until the summed estimate drops below abs_tol. Throws
// QuadratureError if that needs more than max_intervals panels.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol, int max_intervals = 4000);

}  // namespace slcone
