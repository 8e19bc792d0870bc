#include "lrk/criticality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lrk/entanglement.hpp"
#include "lrk/fit.hpp"

namespace lrk {

namespace {

ModelParams shifted(ModelParams p, ScanAxis axis, double value) {
    (axis == ScanAxis::alpha ? p.alpha : p.mu) = value;
    return p;
}

double coordinate(const ModelParams& p, ScanAxis axis) { return axis == ScanAxis::alpha ? p.alpha : p.mu; }

struct Evaluation {
    std::vector<double> c;
    std::vector<ConcurrenceBranch> branch;
};

Evaluation evaluate(const ModelParams& p, int d_max, const QuadratureConfig& q) {
    const auto tbl = correlator_table(p, d_max, q);
    Evaluation ev;
    for (int d = 1; d <= d_max; ++d) {
        const auto s = two_site_state(d, tbl);
        ev.c.push_back(concurrence(s));
        ev.branch.push_back(active_branch(s));
    }
    return ev;
}

}  // namespace

std::vector<DerivativeEstimate> concurrence_derivatives(const ModelParams& p, int d_max, const CriticalityConfig& cfg) {
    if (!(cfg.step > 0.0)) throw InvalidInput("derivative step must be > 0");
    if (d_max < 1) throw InvalidInput("concurrence_derivatives: d_max must be >= 1");
    const double x = coordinate(p, cfg.axis);
    const double h = cfg.step;
    // The table needs x_max >= d_max and at least 1.
    const int table_d = std::max(d_max, 1);

    const auto plus = evaluate(shifted(p, cfg.axis, x + h), table_d, cfg.quad);
    const auto minus = evaluate(shifted(p, cfg.axis, x - h), table_d, cfg.quad);
    const auto plus_half = evaluate(shifted(p, cfg.axis, x + 0.5 * h), table_d, cfg.quad);
    const auto minus_half = evaluate(shifted(p, cfg.axis, x - 0.5 * h), table_d, cfg.quad);

    std::vector<DerivativeEstimate> out;
    for (int i = 0; i < d_max; ++i) {
        const double coarse = (plus.c[i] - minus.c[i]) / (2.0 * h);
        const double fine = (plus_half.c[i] - minus_half.c[i]) / h;
        DerivativeEstimate est;
        est.value = fine + (fine - coarse) / 3.0;
        est.error = std::abs(fine - coarse) / 3.0;
        est.reliable = est.error <= 0.01 * std::abs(est.value);
        const auto b = plus.branch[i];
        est.kink = minus.branch[i] != b || plus_half.branch[i] != b || minus_half.branch[i] != b;
        out.push_back(est);
    }
    return out;
}

DerivativeEstimate dC_dalpha(int d, const ModelParams& p, double step, const QuadratureConfig& q) {
    CriticalityConfig cfg;
    cfg.step = step;
    cfg.quad = q;
    cfg.axis = ScanAxis::alpha;
    return concurrence_derivatives(p, d, cfg).back();
}

double critical_value(const ModelParams& p, ScanAxis axis) {
    if (axis == ScanAxis::alpha) {
        const auto bounds = phase_boundary(p);
        if (bounds.empty()) throw InvalidInput("no alpha* exists for " + to_string(p));
        const auto it = std::min_element(bounds.begin(), bounds.end(), [&](const auto& a, const auto& b) {
            return std::abs(a.alpha_star - p.alpha) < std::abs(b.alpha_star - p.alpha);
        });
        return it->alpha_star;
    }
    const auto mus = critical_mu(p);
    const auto it = std::min_element(mus.begin(), mus.end(), [&](const auto& a, const auto& b) {
        return std::abs(a.mu_star - p.mu) < std::abs(b.mu_star - p.mu);
    });
    return it->mu_star;
}

ScalingScan log_divergence_scan(const ModelParams& p, int d_max, Side side, const LogWindow& w,
                                const CriticalityConfig& cfg) {
    if (d_max < 1) throw InvalidInput("log_divergence_scan: d_max must be >= 1");
    if (!(w.lo < w.hi)) throw InvalidInput("log window must satisfy lo < hi");
    if (!(w.hi < std::log(0.05))) throw InvalidInput("log window upper end must stay below ln(0.05)");
    if (w.samples < 6) throw InvalidInput("log window needs at least 6 samples");

    ScalingScan scan;
    scan.axis = cfg.axis;
    scan.side = side;
    scan.critical = critical_value(p, cfg.axis);
    const double sign = side == Side::above ? 1.0 : -1.0;

    for (int i = 0; i < w.samples; ++i) {
        const double lx = w.lo + (w.hi - w.lo) * static_cast<double>(i) / static_cast<double>(w.samples - 1);
        const double offset = std::exp(lx);
        if (offset < 10.0 * cfg.step) continue;
        const double x = scan.critical + sign * offset;
        if (cfg.axis == ScanAxis::alpha && !(x - cfg.step > 0.0)) continue;
        scan.log_offsets.push_back(lx);
        scan.values.push_back(x);
        scan.derivatives.push_back(concurrence_derivatives(shifted(p, cfg.axis, x), d_max, cfg));
    }

    for (int d = 1; d <= d_max; ++d) {
        std::vector<double> xs, ys;
        for (std::size_t s = 0; s < scan.log_offsets.size(); ++s) {
            const auto& est = scan.derivatives[s][static_cast<std::size_t>(d - 1)];
            if (est.kink || !est.reliable) continue;
            xs.push_back(scan.log_offsets[s]);
            ys.push_back(est.value);
        }
        if (xs.size() < 6) {
            throw InvalidInput("log_divergence_fit: only " + std::to_string(xs.size()) +
                               " valid derivative points for d = " + std::to_string(d));
        }
        const auto line = fit_line(xs, ys);
        ScalingFit f;
        f.d = d;
        f.k_d = line.slope;
        f.k_d_error = line.slope_stderr;
        f.intercept = line.intercept;
        f.critical = scan.critical;
        f.axis = cfg.axis;
        f.side = side;
        f.window_lo = xs.front();
        f.window_hi = xs.back();
        f.residual = line.rms_residual;
        f.correlation = line.correlation;
        f.points = line.n;
        scan.fits.push_back(f);
    }
    return scan;
}

ScalingFit log_divergence_fit(int d, const ModelParams& p, Side side, const LogWindow& w,
                              const CriticalityConfig& cfg) {
    return log_divergence_scan(p, d, side, w, cfg).fits.back();
}

KdFit kd_linear_fit(std::span<const ScalingFit> fits) {
    if (fits.size() < 4) throw InvalidInput("kd_linear_fit: need at least 4 distances");
    std::vector<double> x, y;
    for (const auto& f : fits) {
        x.push_back(std::abs(f.d));
        y.push_back(f.k_d);
    }
    const auto line = fit_line(x, y);
    KdFit r;
    r.q = line.slope;
    r.q_prime = line.intercept;
    r.residual = line.rms_residual;
    r.correlation = line.correlation;
    r.nonlinear = std::abs(line.correlation) < 0.98;
    r.points = line.n;
    return r;
}

double derivative_peak(const ModelParams& p, int d, double lo, double hi, int n, const CriticalityConfig& cfg) {
    if (n < 3 || !(lo < hi)) throw InvalidInput("derivative_peak: need n >= 3 and lo < hi");
    double best_x = lo;
    double best = -1.0;
    for (int i = 0; i < n; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        const auto est = concurrence_derivatives(shifted(p, cfg.axis, x), d, cfg).back();
        if (std::abs(est.value) > best) {
            best = std::abs(est.value);
            best_x = x;
        }
    }
    return best_x;
}

}  // namespace lrk
