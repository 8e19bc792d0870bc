#include "lrk/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lrk/fit.hpp"

namespace lrk {

namespace {

void require_block(int block, const CorrelatorTable& tbl) {
    if (block < 1) throw InvalidInput("block size must be >= 1");
    if (tbl.x_max() < block) {
        throw InvalidInput("correlator table (x_max = " + std::to_string(tbl.x_max()) +
                           ") too short for block " + std::to_string(block));
    }
}

double binary_entropy(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

}  // namespace

Eigen::MatrixXd block_correlation_matrix(int block, const CorrelatorTable& tbl) {
    require_block(block, tbl);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * block, 2 * block);
    for (int i = 0; i < block; ++i) {
        for (int j = 0; j < block; ++j) {
            const int l = i - j;
            m(2 * i, 2 * j + 1) = tbl(l);
            m(2 * i + 1, 2 * j) = -tbl(-l);
        }
    }
    return m;
}

std::vector<double> block_spectrum(int block, const CorrelatorTable& tbl) {
    require_block(block, tbl);
    Eigen::MatrixXd k(block, block);
    for (int i = 0; i < block; ++i) {
        for (int j = 0; j < block; ++j) k(i, j) = tbl(i - j);
    }
    const Eigen::MatrixXd gram = k.transpose() * k;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) throw NumericalFailure("block_spectrum: eigensolver failed");

    std::vector<double> nu(static_cast<std::size_t>(block));
    for (int m = 0; m < block; ++m) {
        const double v = std::sqrt(std::max(eig.eigenvalues()(m), 0.0));
        if (v > 1.0 + 1e-8) {
            throw NumericalFailure("block_spectrum: nu = " + std::to_string(v) +
                                   " exceeds 1; correlator table is inconsistent with a pure state");
        }
        nu[static_cast<std::size_t>(m)] = std::min(v, 1.0);
    }
    return nu;
}

double entropy_from_spectrum(std::span<const double> nu) {
    double s = 0.0;
    for (double v : nu) s += binary_entropy(0.5 * (1.0 + v));
    return s;
}

double block_entropy(int block, const CorrelatorTable& tbl) {
    const auto nu = block_spectrum(block, tbl);
    return entropy_from_spectrum(nu);
}

CentralChargeFit central_charge_fit(std::span<const int> lengths, std::span<const double> s_a, int window_lo,
                                    int window_hi) {
    if (lengths.size() != s_a.size()) throw InvalidInput("central_charge_fit: lengths and entropies differ in size");
    std::vector<double> x, y;
    for (std::size_t i = 0; i < lengths.size(); ++i) {
        if (lengths[i] >= window_lo && lengths[i] <= window_hi) {
            x.push_back(std::log2(static_cast<double>(lengths[i])));
            y.push_back(s_a[i]);
        }
    }
    if (x.size() < 4) throw InvalidInput("central_charge_fit: need at least 4 points in the fit window");

    const auto line = fit_line(x, y);
    CentralChargeFit f;
    f.c = 6.0 * line.slope;
    f.s0 = line.intercept;
    f.residual = line.rms_residual;
    f.points = line.n;
    f.window_lo = window_lo;
    f.window_hi = window_hi;

    // Compare slopes on the two halves of the window (sharing the middle point).
    const std::size_t mid = x.size() / 2;
    const std::span<const double> xs(x), ys(y);
    const double s1 = fit_line(xs.first(mid + 1), ys.first(mid + 1)).slope;
    const double s2 = fit_line(xs.subspan(mid), ys.subspan(mid)).slope;
    const double scale = std::max(std::abs(line.slope), 1e-12);
    f.curvature = std::abs(s2 - s1) / scale;
    f.curved = f.curvature > 0.2 || f.c < 0.1;
    return f;
}

EntropyCurve entropy_curve(const CorrelatorTable& tbl, std::span<const int> lengths, int window_lo, int window_hi) {
    EntropyCurve curve;
    curve.lengths.assign(lengths.begin(), lengths.end());
    for (int l : lengths) curve.s_a.push_back(block_entropy(l, tbl));
    curve.fit = central_charge_fit(curve.lengths, curve.s_a, window_lo, window_hi);
    return curve;
}

std::vector<int> log_spaced_lengths(int l_max, int per_octave) {
    if (l_max < 1 || per_octave < 1) throw InvalidInput("log_spaced_lengths: l_max and per_octave must be >= 1");
    std::vector<int> out;
    for (int j = 0;; ++j) {
        const auto l = static_cast<int>(std::lround(std::exp2(static_cast<double>(j) / per_octave)));
        if (l > l_max) break;
        if (out.empty() || out.back() != l) out.push_back(l);
    }
    if (out.back() != l_max) out.push_back(l_max);
    return out;
}

}  // namespace lrk
