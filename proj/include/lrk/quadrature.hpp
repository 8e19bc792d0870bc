#pragma once

// Globally adaptive 21-point Gauss-Kronrod quadrature on a partition of
// [lo, hi]. The interval with the largest |K21 - G10| estimate is bisected
// until the summed estimate drops below the absolute tolerance.

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <span>
#include <vector>

namespace lrk {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    int intervals = 0;
    bool converged = false;
};

namespace detail {

inline constexpr std::array<double, 11> kKronrodNodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

inline constexpr std::array<double, 11> kKronrodWeights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208980940075, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, ..., 9).
inline constexpr std::array<double, 5> kGaussWeights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
    double lo;
    double hi;
    double value;
    double error;
    int depth;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <typename F>
Panel gauss_kronrod21(F& f, double lo, double hi, int depth) {
    const double c = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    double kronrod = kKronrodWeights[10] * f(c);
    double gauss = 0.0;
    for (int i = 0; i < 10; ++i) {
        const double dx = h * kKronrodNodes[i];
        const double s = f(c - dx) + f(c + dx);
        kronrod += kKronrodWeights[i] * s;
        if (i % 2 == 1) gauss += kGaussWeights[i / 2] * s;
    }
    return {lo, hi, kronrod * h, std::abs((kronrod - gauss) * h), depth};
}

}  // namespace detail

/// Integrates f over the partition given by `breakpoints` (sorted, at least
/// two entries). Panels are bisected at most `max_depth` times; a panel that
/// would need more is left as is and the result reports converged = false.
template <typename F>
QuadratureResult integrate_adaptive(F&& f, std::span<const double> breakpoints, double abs_tol,
                                    int max_depth, int max_panels = 200000) {
    std::priority_queue<detail::Panel> queue;
    std::vector<detail::Panel> frozen;
    double total_error = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (!(breakpoints[i + 1] > breakpoints[i])) continue;
        auto p = detail::gauss_kronrod21(f, breakpoints[i], breakpoints[i + 1], 0);
        total_error += p.error;
        queue.push(p);
    }

    int panels = static_cast<int>(queue.size());
    bool converged = true;
    while (!queue.empty() && total_error > abs_tol) {
        detail::Panel worst = queue.top();
        queue.pop();
        if (worst.depth >= max_depth || panels >= max_panels) {
            frozen.push_back(worst);
            converged = false;
            continue;
        }
        const double mid = 0.5 * (worst.lo + worst.hi);
        auto left = detail::gauss_kronrod21(f, worst.lo, mid, worst.depth + 1);
        auto right = detail::gauss_kronrod21(f, mid, worst.hi, worst.depth + 1);
        total_error += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        ++panels;
    }

    // Re-sum from scratch so the running update does not accumulate drift.
    QuadratureResult r;
    std::vector<detail::Panel> all = std::move(frozen);
    while (!queue.empty()) {
        all.push_back(queue.top());
        queue.pop();
    }
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
    for (const auto& p : all) {
        r.value += p.value;
        r.error += p.error;
    }
    r.intervals = static_cast<int>(all.size());
    r.converged = converged && r.error <= abs_tol;
    return r;
}

}  // namespace lrk
