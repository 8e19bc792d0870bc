#pragma once

// Ground-state fermionic correlator
//
//   G_x = (1/pi) int_0^pi [eps2(k) sin(kx) - eps1(k) cos(kx)] / E(k) dk
//
// and the two-site spin correlators built from it (P_zz, P_z0 and the
// Toeplitz determinants P_xx, P_yy).

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lrk/model.hpp"

namespace lrk {

struct QuadratureConfig {
    double abs_tol = 1e-10;
    int max_subdivisions = 60;          ///< bisection depth limit per panel
    std::size_t grid_size = 1u << 16;   ///< FFT pre-pass samples, power of two

    void validate() const;
};

/// Integrand of G_x on [0, pi], including the 1/pi prefactor.
inline double g_integrand(double k, long x, const ModelParams& p) {
    const auto s = band_energy(k, p);
    if (s.energy == 0.0) return 0.0;
    const double kx = k * static_cast<double>(x);
    return (s.eps2 * std::sin(kx) - s.eps1 * std::cos(kx)) / (s.energy * std::numbers::pi);
}

/// G_x by adaptive quadrature. Throws NumericalFailure when the error
/// estimate stays above q.abs_tol.
double g_correlator(long x, const ModelParams& p, const QuadratureConfig& q = {});

/// Same, with a precomputed gap minimum used to seed the partition.
double g_correlator(long x, const ModelParams& p, const QuadratureConfig& q, double gap_k_min);

/// Immutable table of G_x for |x| <= x_max + 1.
class CorrelatorTable {
public:
    CorrelatorTable() = default;
    CorrelatorTable(ModelParams params, int x_max, std::vector<double> values);

    [[nodiscard]] double operator()(long x) const;
    [[nodiscard]] const ModelParams& params() const { return params_; }
    [[nodiscard]] int x_max() const { return x_max_; }
    /// Largest |x| stored (x_max + 1).
    [[nodiscard]] long reach() const { return x_max_ + 1; }
    /// Values for x = -reach .. reach.
    [[nodiscard]] std::span<const double> values() const { return values_; }
    /// Entries recomputed by adaptive quadrature after the FFT pre-pass.
    [[nodiscard]] int refined_entries() const { return refined_; }
    void set_refined_entries(int n) { refined_ = n; }

private:
    ModelParams params_{};
    int x_max_ = 0;
    std::vector<double> values_;
    int refined_ = 0;
};

/// FFT pre-pass over q.grid_size momenta; entries whose aliasing estimate
/// (full grid vs every other sample) exceeds q.abs_tol are recomputed by
/// adaptive quadrature.
CorrelatorTable correlator_table(const ModelParams& p, int x_max, const QuadratureConfig& q = {});

/// Every entry by adaptive quadrature (no FFT pre-pass).
CorrelatorTable correlator_table_direct(const ModelParams& p, int x_max, const QuadratureConfig& q = {});

struct PCoefficients {
    double p00 = 1.0;
    double pzz = 0.0;
    double pz0 = 0.0;
    double pxx = 0.0;
    double pyy = 0.0;
    int d = 0;
};

/// d x d Toeplitz matrix T_ij = G_{i - j + shift}.
Eigen::MatrixXd toeplitz_matrix(const CorrelatorTable& tbl, int d, int shift);

/// det T via LU with partial pivoting.
double toeplitz_determinant(const CorrelatorTable& tbl, int d, int shift);

/// Requires 1 <= d <= tbl.x_max().
PCoefficients p_coefficients(int d, const CorrelatorTable& tbl);

}  // namespace lrk
