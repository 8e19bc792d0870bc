#include "lrk/fit.hpp"

#include <cmath>

#include "lrk/errors.hpp"

namespace lrk {

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw InvalidInput("fit_line: x and y differ in length");
    const auto n = static_cast<double>(x.size());
    if (x.size() < 2) throw InvalidInput("fit_line: need at least two points");

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0) throw InvalidInput("fit_line: all x values coincide");

    LinearFit f;
    f.n = static_cast<int>(x.size());
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (f.slope * x[i] + f.intercept);
        ss_res += r * r;
    }
    f.rms_residual = std::sqrt(ss_res / n);
    if (syy > 0.0) {
        f.r2 = 1.0 - ss_res / syy;
        f.correlation = sxy / std::sqrt(sxx * syy);
    } else {
        // constant data is fitted exactly
        f.r2 = 1.0;
        f.correlation = 0.0;
    }
    if (x.size() > 2) f.slope_stderr = std::sqrt(ss_res / (n - 2.0) / sxx);
    return f;
}

}  // namespace lrk
