#include "lrk/correlators.hpp"

#include <bit>
#include <complex>
#include <string>

#include <unsupported/Eigen/FFT>

#include "lrk/quadrature.hpp"

namespace lrk {

void QuadratureConfig::validate() const {
    if (!(abs_tol > 0.0)) throw InvalidInput("quadrature abs_tol must be > 0");
    if (max_subdivisions < 1) throw InvalidInput("quadrature max_subdivisions must be >= 1");
    if (grid_size < 64 || !std::has_single_bit(grid_size)) {
        throw InvalidInput("quadrature grid_size must be a power of two >= 64");
    }
}

namespace {

constexpr long kMaxSeparation = 100000;

// Partition of [0, pi]: one panel per oscillation period of cos(kx),
// plus a geometric cluster around the gap minimum where the integrand has its
// sharpest feature near criticality.
std::vector<double> partition(long x, double gap_k_min) {
    const double pi = std::numbers::pi;
    std::vector<double> pts{0.0, pi};
    const long panels = std::max(1L, std::abs(x) / 2);
    for (long i = 1; i < panels; ++i) pts.push_back(pi * static_cast<double>(i) / static_cast<double>(panels));
    const double k0 = std::clamp(gap_k_min, 0.0, pi);
    pts.push_back(k0);
    for (double w = 0.1; w > 1e-9; w *= 0.1) {
        if (k0 - w > 0.0) pts.push_back(k0 - w);
        if (k0 + w < pi) pts.push_back(k0 + w);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

}  // namespace

double g_correlator(long x, const ModelParams& p, const QuadratureConfig& q, double gap_k_min) {
    p.validate();
    q.validate();
    if (std::abs(x) > kMaxSeparation) throw InvalidInput("g_correlator: |x| exceeds 1e5");
    const auto pts = partition(x, gap_k_min);
    const auto r = integrate_adaptive([&](double k) { return g_integrand(k, x, p); }, pts, q.abs_tol,
                                      q.max_subdivisions);
    if (!r.converged) {
        throw NumericalFailure("G_" + std::to_string(x) + " did not converge (error estimate " +
                               std::to_string(r.error) + ") at " + to_string(p));
    }
    return r.value;
}

double g_correlator(long x, const ModelParams& p, const QuadratureConfig& q) {
    return g_correlator(x, p, q, global_gap(p).k_min);
}

CorrelatorTable::CorrelatorTable(ModelParams params, int x_max, std::vector<double> values)
    : params_(params), x_max_(x_max), values_(std::move(values)) {
    if (x_max_ < 1) throw InvalidInput("correlator table: x_max must be >= 1");
    if (values_.size() != static_cast<std::size_t>(2 * (x_max_ + 1) + 1)) {
        throw InvalidInput("correlator table: expected 2*x_max + 3 values");
    }
}

double CorrelatorTable::operator()(long x) const {
    if (std::abs(x) > reach()) {
        throw InvalidInput("correlator table: separation " + std::to_string(x) + " outside +-" +
                           std::to_string(reach()));
    }
    return values_[static_cast<std::size_t>(x + reach())];
}

CorrelatorTable correlator_table(const ModelParams& p, int x_max, const QuadratureConfig& q) {
    p.validate();
    q.validate();
    if (x_max < 1) throw InvalidInput("correlator_table: x_max must be >= 1");
    if (x_max + 1 > kMaxSeparation) throw InvalidInput("correlator_table: x_max exceeds 1e5");

    const long reach = x_max + 1;
    // Keep the tabulated range well inside the aliasing-free band.
    std::size_t m = q.grid_size;
    while (m < 8 * static_cast<std::size_t>(reach)) m *= 2;

    const double pi = std::numbers::pi;
    std::vector<std::complex<double>> samples(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double k = 2.0 * pi * static_cast<double>(i) / static_cast<double>(m);
        const auto s = band_energy(k, p);
        samples[i] = s.energy == 0.0 ? std::complex<double>{}
                                     : std::complex<double>(-s.eps1, -s.eps2) / s.energy;
    }
    std::vector<std::complex<double>> half(m / 2);
    for (std::size_t i = 0; i < m / 2; ++i) half[i] = samples[2 * i];

    // inv() carries the 1/M factor: out[x] = mean_k h(k) e^{ikx}.
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> full_out, half_out;
    fft.inv(full_out, samples);
    fft.inv(half_out, half);

    const auto wrap = [](long x, std::size_t n) {
        const long nn = static_cast<long>(n);
        return static_cast<std::size_t>(((x % nn) + nn) % nn);
    };

    std::vector<double> values(static_cast<std::size_t>(2 * reach + 1));
    const double k_min = global_gap(p).k_min;
    int refined = 0;
    for (long x = -reach; x <= reach; ++x) {
        const double g_full = full_out[wrap(x, m)].real();
        const double g_half = half_out[wrap(x, m / 2)].real();
        double g = g_full;
        if (std::abs(g_full - g_half) > q.abs_tol) {
            g = g_correlator(x, p, q, k_min);
            ++refined;
        }
        values[static_cast<std::size_t>(x + reach)] = g;
    }
    CorrelatorTable tbl(p, x_max, std::move(values));
    tbl.set_refined_entries(refined);
    return tbl;
}

CorrelatorTable correlator_table_direct(const ModelParams& p, int x_max, const QuadratureConfig& q) {
    p.validate();
    q.validate();
    if (x_max < 1) throw InvalidInput("correlator_table_direct: x_max must be >= 1");
    const long reach = x_max + 1;
    const double k_min = global_gap(p).k_min;
    std::vector<double> values(static_cast<std::size_t>(2 * reach + 1));
    for (long x = -reach; x <= reach; ++x) {
        values[static_cast<std::size_t>(x + reach)] = g_correlator(x, p, q, k_min);
    }
    CorrelatorTable tbl(p, x_max, std::move(values));
    tbl.set_refined_entries(static_cast<int>(2 * reach + 1));
    return tbl;
}

Eigen::MatrixXd toeplitz_matrix(const CorrelatorTable& tbl, int d, int shift) {
    Eigen::MatrixXd t(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) t(i, j) = tbl(i - j + shift);
    }
    return t;
}

double toeplitz_determinant(const CorrelatorTable& tbl, int d, int shift) {
    return toeplitz_matrix(tbl, d, shift).partialPivLu().determinant();
}

PCoefficients p_coefficients(int d, const CorrelatorTable& tbl) {
    if (d < 1 || d > tbl.x_max()) {
        throw InvalidInput("p_coefficients: d = " + std::to_string(d) + " outside [1, " +
                           std::to_string(tbl.x_max()) + "]");
    }
    const double g0 = tbl(0);
    PCoefficients c;
    c.d = d;
    c.pzz = g0 * g0 - tbl(d) * tbl(-d);
    c.pz0 = -g0;
    c.pxx = toeplitz_determinant(tbl, d, -1);
    c.pyy = toeplitz_determinant(tbl, d, +1);
    return c;
}

}  // namespace lrk
