#pragma once

#include <functional>

namespace pmeb {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int evaluations = 0;
};

/// Adaptive Simpson quadrature of f over [lo, hi] to an absolute tolerance.
///
/// Each accepted panel carries the Richardson-corrected value; the tolerance
/// is halved at every split. Throws NumericalError when a panel cannot meet
/// its share of the tolerance within max_depth bisections.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double lo, double hi,
                                  double abs_tolerance, int max_depth = 60);

} // namespace pmeb
