#pragma once

// Numerical derivatives of C_d across the transition and the logarithmic
// scaling law dC_d/dalpha ~ k_d ln|alpha - alpha*| with k_d = q |d| + q'.

#include <span>
#include <vector>

#include "lrk/correlators.hpp"

namespace lrk {

/// Parameter varied across the transition.
enum class ScanAxis { alpha, mu };

/// Side of the critical point sampled by a fit.
enum class Side { above, below };

struct CriticalityConfig {
    double step = 1e-6;
    QuadratureConfig quad{1e-13, 60, 1u << 16};
    ScanAxis axis = ScanAxis::alpha;
};

struct DerivativeEstimate {
    double value = 0.0;
    double error = 0.0;     ///< Richardson estimate
    bool reliable = false;  ///< error <= 1% of |value|
    bool kink = false;      ///< active concurrence branch changes within the stencil
};

/// Richardson-extrapolated central differences (step, step/2) of C_d with
/// respect to the scan axis, for every d = 1..d_max from shared tables.
std::vector<DerivativeEstimate> concurrence_derivatives(const ModelParams& p, int d_max,
                                                        const CriticalityConfig& cfg = {});

/// Single-separation convenience wrapper along alpha.
DerivativeEstimate dC_dalpha(int d, const ModelParams& p, double step = 1e-6,
                             const QuadratureConfig& q = CriticalityConfig{}.quad);

/// alpha* (nearest to p.alpha) or mu* (nearest to p.mu) from the analytic
/// boundaries. Throws InvalidInput when there is none.
double critical_value(const ModelParams& p, ScanAxis axis);

struct LogWindow {
    double lo = -11.0;  ///< ln|x - x*| lower end
    double hi = -8.0;   ///< upper end, must stay below ln 0.05
    int samples = 12;
};

struct ScalingFit {
    int d = 0;
    double k_d = 0.0;
    double k_d_error = 0.0;
    double intercept = 0.0;
    double critical = 0.0;
    ScanAxis axis = ScanAxis::alpha;
    Side side = Side::above;
    double window_lo = 0.0;
    double window_hi = 0.0;
    double residual = 0.0;     ///< rms residual
    double correlation = 0.0;  ///< Pearson r of derivative vs ln|x - x*|
    int points = 0;
};

/// Derivative samples over a window plus the per-d fits.
struct ScalingScan {
    double critical = 0.0;
    ScanAxis axis = ScanAxis::alpha;
    Side side = Side::above;
    std::vector<double> log_offsets;  ///< ln|x - x*| per sample
    std::vector<double> values;       ///< x per sample
    std::vector<std::vector<DerivativeEstimate>> derivatives;  ///< [sample][d - 1]
    std::vector<ScalingFit> fits;     ///< d = 1..d_max
};

/// Samples the window on one side of the critical point. Samples closer than
/// 10 * step to it, or with a kink or unreliable derivative for a given d,
/// are dropped from that d's fit. Throws InvalidInput when a fit keeps fewer
/// than 6 points.
ScalingScan log_divergence_scan(const ModelParams& p, int d_max, Side side, const LogWindow& w = {},
                                const CriticalityConfig& cfg = {});

ScalingFit log_divergence_fit(int d, const ModelParams& p, Side side, const LogWindow& w = {},
                              const CriticalityConfig& cfg = {});

struct KdFit {
    double q = 0.0;
    double q_prime = 0.0;
    double residual = 0.0;
    double correlation = 0.0;
    bool nonlinear = false;  ///< correlation below 0.98
    int points = 0;
};

/// k_d against |d|. Requires >= 4 distances.
KdFit kd_linear_fit(std::span<const ScalingFit> fits);

/// Location of the largest |dC_d/dx| on an n-point grid over [lo, hi].
double derivative_peak(const ModelParams& p, int d, double lo, double hi, int n, const CriticalityConfig& cfg = {});

}  // namespace lrk
