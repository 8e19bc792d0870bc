#pragma once

#include <span>

namespace lrk {

/// Ordinary least squares y = slope * x + intercept.
struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;           ///< coefficient of determination
    double correlation = 0.0;  ///< Pearson r (signed)
    double rms_residual = 0.0;
    double slope_stderr = 0.0;
    int n = 0;
};

/// Requires at least two points with distinct x.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace lrk
