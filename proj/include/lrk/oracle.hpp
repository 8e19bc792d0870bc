#pragma once

// Finite periodic ring: exact diagonalization of the quadratic Hamiltonian,
// Wick reconstruction of two-site density matrices and a brute-force
// validation report against the closed-form paths.

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lrk/correlators.hpp"

namespace lrk {

struct RingConfig {
    int n_sites = 512;
    int range_cut = -1;  ///< negative means n_sites / 2 - 1
    ModelParams params{};

    [[nodiscard]] int effective_range() const { return range_cut < 0 ? n_sites / 2 - 1 : range_cut; }
    /// n_sites even and >= 4, range in [1, n_sites / 2), params valid.
    void validate() const;
};

/// Ground states with a single-particle level below this (units of |t|) are
/// treated as degenerate.
inline constexpr double kDegeneracyTolerance = 1e-9;

struct GroundStateCorrelations {
    Eigen::MatrixXd hop;   ///< <c_i^dag c_j>
    Eigen::MatrixXd pair;  ///< <c_i c_j>
    double min_energy = 0.0;
    ModelParams params{};

    [[nodiscard]] int n_sites() const { return static_cast<int>(hop.rows()); }
};

enum class RingSolver { momentum, dense };

/// Real symmetric 2N x 2N BdG matrix [[A, B], [-B, -A]] in the basis
/// (c_1..c_N, c_1^dag..c_N^dag), with A_ij = mu delta_ij + t(r) and
/// B_ij = -sign(r) Delta(|r|) for ring displacement r = i - j.
Eigen::MatrixXd bdg_matrix(const RingConfig& cfg);

/// Single-particle coupling value at ring displacement r (folded into
/// (-N/2, N/2]); zero beyond the range cut.
double ring_hopping(long r, const RingConfig& cfg);
double ring_pairing(long r, const RingConfig& cfg);

/// Dense path requires n_sites <= 1024. Throws NumericalFailure when the
/// ground state is (near) degenerate.
GroundStateCorrelations diagonalize_ring(const RingConfig& cfg, RingSolver solver = RingSolver::momentum);

/// G_x = -delta_x0 + 2 <c_i^dag c_{i+x}> + 2 <c_i c_{i+x}>, sites mod N.
double ring_g(const GroundStateCorrelations& gs, long x, int site = 0);

/// G_x for |x| <= x_max + 1 packed as a table. Requires x_max + 1 < N / 2.
CorrelatorTable ring_correlator_table(const GroundStateCorrelations& gs, int x_max);

/// Pfaffian of a skew-symmetric matrix by Parlett-Reid reduction.
template <typename Scalar>
Scalar pfaffian(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a) {
    const Eigen::Index n = a.rows();
    if (n % 2 != 0) return Scalar(0);
    Scalar pf(1);
    for (Eigen::Index k = 0; k + 1 < n; k += 2) {
        Eigen::Index kp = k + 1;
        a.col(k).tail(n - k - 1).cwiseAbs().maxCoeff(&kp);
        kp += k + 1;
        if (kp != k + 1) {
            a.row(k + 1).swap(a.row(kp));
            a.col(k + 1).swap(a.col(kp));
            pf = -pf;
        }
        if (a(k + 1, k) == Scalar(0)) return Scalar(0);
        pf *= a(k, k + 1);
        if (k + 2 < n) {
            const Eigen::Index m = n - k - 2;
            const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> tau = a.row(k).tail(m).transpose() / a(k, k + 1);
            const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> col = a.col(k + 1).tail(m);
            a.bottomRightCorner(m, m) += tau * col.transpose() - col * tau.transpose();
        }
    }
    return pf;
}

/// Majorana word: coefficient times gamma_{p1} gamma_{p2} ..., with
/// gamma_{2l} = c_l + c_l^dag and gamma_{2l+1} = i (c_l^dag - c_l).
struct MajoranaWord {
    std::complex<double> coeff{1.0, 0.0};
    std::vector<int> ops;
};

/// Sorts the word with anticommutation signs and cancels squared factors.
MajoranaWord canonical(MajoranaWord w);

/// <gamma_p gamma_q> from the ground-state correlations.
std::complex<double> majorana_pair(const GroundStateCorrelations& gs, int p, int q);

/// Ground-state expectation of a word via Wick's theorem.
std::complex<double> expectation(const GroundStateCorrelations& gs, const MajoranaWord& w);

/// <sigma^a_i sigma^b_j> for a, b in {0, x, y, z} = {0, 1, 2, 3}, including
/// the Jordan-Wigner string between the sites.
std::complex<double> spin_correlator(const GroundStateCorrelations& gs, int i, int a, int j, int b);

/// Two-site reduced density matrix in the basis |s_i s_j>, |0> = spin up,
/// first tensor factor site i. Requires i != j and |i - j| <= 64.
Eigen::Matrix4cd wick_two_site(const GroundStateCorrelations& gs, int i, int j);
Eigen::Matrix4cd wick_two_site(const RingConfig& cfg, int i, int j);

struct OracleCheck {
    std::string name;
    double max_error = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

struct OracleReport {
    ModelParams params{};
    int n_sites = 0;
    std::vector<OracleCheck> checks;
    [[nodiscard]] bool passed() const;
};

/// Momentum vs dense ring, ring G_x vs quadrature for |x| <= x_max, closed
/// form C_d vs Wick-reconstructed concurrence for d <= d_max, and structural
/// checks on the reconstructed matrices.
OracleReport oracle_validation(const ModelParams& p, int n_sites = 512, int x_max = 20, int d_max = 8,
                               const QuadratureConfig& q = {});

}  // namespace lrk
