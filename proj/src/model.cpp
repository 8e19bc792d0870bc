#include "lrk/model.hpp"

#include <algorithm>
#include <array>
#include <sstream>

namespace lrk {

void ModelParams::validate() const {
    for (double v : {mu, t, delta, alpha, beta}) {
        if (!std::isfinite(v)) throw InvalidInput("model parameters must be finite: " + to_string(*this));
    }
    if (!(alpha > 0.0)) throw InvalidInput("alpha must be > 0 (got " + std::to_string(alpha) + ")");
    if (!(beta > 0.0)) throw InvalidInput("beta must be > 0 (got " + std::to_string(beta) + ")");
    if (t == 0.0) throw InvalidInput("t must be nonzero");
}

std::string to_string(const ModelParams& p) {
    std::ostringstream os;
    os.precision(17);
    os << "mu=" << p.mu << " t=" << p.t << " delta=" << p.delta << " alpha=" << p.alpha << " beta=" << p.beta;
    return os.str();
}

std::string to_string(BoundaryBranch b) { return b == BoundaryBranch::plus ? "plus" : "minus"; }

namespace {

double energy_at(double k, const ModelParams& p) { return band_energy(k, p).energy; }

// Golden-section minimisation of E on [lo, hi].
std::pair<double, double> golden_min(double lo, double hi, const ModelParams& p) {
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = energy_at(x1, p);
    double f2 = energy_at(x2, p);
    while (hi - lo > 1e-10) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = energy_at(x1, p);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = energy_at(x2, p);
        }
    }
    std::array<std::pair<double, double>, 4> cands{{{x1, f1}, {x2, f2}, {lo, energy_at(lo, p)}, {hi, energy_at(hi, p)}}};
    return *std::min_element(cands.begin(), cands.end(),
                             [](const auto& a, const auto& b) { return a.second < b.second; });
}

}  // namespace

GapResult global_gap(const ModelParams& p, int k_resolution) {
    p.validate();
    if (k_resolution < 64) throw InvalidInput("global_gap: k_resolution must be >= 64");

    const double pi = std::numbers::pi;
    const int n = k_resolution;
    std::vector<double> ks(n), es(n);
    for (int i = 0; i < n; ++i) {
        ks[i] = pi * static_cast<double>(i) / static_cast<double>(n - 1);
        es[i] = energy_at(ks[i], p);
    }

    // Local minima of the sampled band, endpoints included.
    std::vector<int> minima;
    for (int i = 0; i < n; ++i) {
        const bool left_ok = i == 0 || es[i] <= es[i - 1];
        const bool right_ok = i == n - 1 || es[i] <= es[i + 1];
        if (left_ok && right_ok) minima.push_back(i);
    }
    std::sort(minima.begin(), minima.end(), [&](int a, int b) { return es[a] < es[b]; });
    if (minima.size() > 3) minima.resize(3);

    double best_k = ks[minima.front()];
    double best_e = es[minima.front()];
    for (int i : minima) {
        const double lo = ks[std::max(i - 1, 0)];
        const double hi = ks[std::min(i + 1, n - 1)];
        const auto [k, e] = golden_min(lo, hi, p);
        if (e < best_e) {
            best_e = e;
            best_k = k;
        }
    }

    GapResult r;
    r.gap = 2.0 * best_e;
    r.k_min = best_k;
    r.closed = r.gap < kGapClosedThreshold * std::abs(p.t);
    constexpr double kEdgeTol = 1e-4;
    r.interior_closing = r.closed && best_k > kEdgeTol && best_k < pi - kEdgeTol;
    return r;
}

std::vector<PhaseBoundary> phase_boundary(const ModelParams& p) {
    if (!(p.t > 0.0) || !std::isfinite(p.t) || !std::isfinite(p.mu)) {
        throw InvalidInput("phase_boundary: requires finite mu and t > 0");
    }
    std::vector<PhaseBoundary> out;
    const double pi = std::numbers::pi;
    const auto add = [&](double denom, BoundaryBranch branch, double k) {
        if (denom == 0.0) return;
        const double arg = p.mu / denom;
        if (arg > 1.0) out.push_back({std::log(arg), branch, k});
    };
    add(2.0 * p.t + p.mu, BoundaryBranch::plus, 0.0);
    add(2.0 * p.t - p.mu, BoundaryBranch::minus, pi);
    return out;
}

std::vector<CriticalMu> critical_mu(const ModelParams& p) {
    p.validate();
    const double a = p.alpha;
    // eps1(0) = mu + 2t / (1 - e^{-a}),  eps1(pi) = mu - 2t / (1 + e^{-a})
    return {
        {-2.0 * p.t / -std::expm1(-a), BoundaryBranch::plus, 0.0},
        {2.0 * p.t / (1.0 + std::exp(-a)), BoundaryBranch::minus, std::numbers::pi},
    };
}

}  // namespace lrk
