#pragma once

// Block entanglement entropy of L contiguous sites from the Majorana
// covariance of the free-fermion ground state, and the central-charge fit
// S_A = (c/6) log2 L + s0.

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lrk/correlators.hpp"

namespace lrk {

/// Real antisymmetric 2L x 2L block correlation matrix, Majoranas ordered
/// (a_1, b_1, a_2, b_2, ...), with 2x2 blocks [[0, G_l], [-G_{-l}, 0]] for
/// site offset l = i - j. Its eigenvalues are +-i nu_m.
Eigen::MatrixXd block_correlation_matrix(int block, const CorrelatorTable& tbl);

/// nu_m in [0, 1], ascending. Computed as singular values of the L x L
/// matrix K_ij = G_{i-j} (the off-diagonal block after regrouping a's and
/// b's) through the symmetric eigenproblem of K^T K. Throws NumericalFailure
/// when some nu_m exceeds 1 + 1e-8.
std::vector<double> block_spectrum(int block, const CorrelatorTable& tbl);

/// sum_m H2((1 + nu_m) / 2) in bits.
double entropy_from_spectrum(std::span<const double> nu);

/// Requires tbl.x_max() >= block.
double block_entropy(int block, const CorrelatorTable& tbl);

struct CentralChargeFit {
    double c = 0.0;
    double s0 = 0.0;
    double residual = 0.0;     ///< rms residual of the linear fit (bits)
    double curvature = 0.0;    ///< relative slope change between window halves
    bool curved = false;       ///< curvature > 0.2 or slope consistent with saturation
    int points = 0;
    int window_lo = 0;
    int window_hi = 0;
};

/// Least squares of S_A against log2 L over lengths in [window_lo, window_hi];
/// c = 6 * slope. Requires >= 4 points in the window.
CentralChargeFit central_charge_fit(std::span<const int> lengths, std::span<const double> s_a, int window_lo,
                                    int window_hi);

struct EntropyCurve {
    std::vector<int> lengths;
    std::vector<double> s_a;
    CentralChargeFit fit;
};

/// Entropies for each requested block size from one table, plus the fit.
EntropyCurve entropy_curve(const CorrelatorTable& tbl, std::span<const int> lengths, int window_lo, int window_hi);

/// Block sizes round(2^(j / per_octave)) up to l_max, deduplicated, with
/// l_max itself appended.
std::vector<int> log_spaced_lengths(int l_max, int per_octave = 4);

}  // namespace lrk
