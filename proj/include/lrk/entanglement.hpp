#pragma once

// Two-site reduced density matrices, concurrence/tangle, truncation length
// and the monogamy / generalized-KBI checks built on top of them.

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lrk/correlators.hpp"
#include "lrk/fit.hpp"

namespace lrk {

/// Slack allowed on positivity of the assembled X-state before it is
/// treated as non-physical.
inline constexpr double kPositivityTolerance = 1e-9;

/// Translationally invariant two-site state
///
///   rho_d = 1/4 [[a, 0, 0, f], [0, b, e, 0], [0, e, b, 0], [f, 0, 0, rho_dd]]
///
/// in the basis |00>, |01>, |10>, |11> with |0> the spin-up (empty) state.
struct TwoSiteState {
    double a = 1.0;
    double rho_dd = 1.0;
    double b = 1.0;
    double e = 0.0;
    double f = 0.0;
    int d = 0;

    [[nodiscard]] double trace() const { return 0.25 * (a + 2.0 * b + rho_dd); }
    [[nodiscard]] Eigen::Matrix4d matrix() const;
    /// Largest amount by which a positivity constraint is violated (<= 0 when physical).
    [[nodiscard]] double positivity_violation() const;
};

/// Assembles the X-state; violations within kPositivityTolerance are clamped,
/// larger ones throw NumericalFailure.
TwoSiteState two_site_state(const PCoefficients& c);
TwoSiteState two_site_state(int d, const CorrelatorTable& tbl);

enum class ConcurrenceBranch { none, f_branch, e_branch };

/// max{0, (|f| - b)/2, (|e| - sqrt(a rho_dd))/2} on the unnormalized entries.
template <typename Scalar>
Scalar x_state_concurrence(Scalar a, Scalar rho_dd, Scalar b, Scalar e, Scalar f) {
    using std::abs;
    using std::max;
    using std::sqrt;
    const Scalar ad = max(a * rho_dd, Scalar(0));
    return max(Scalar(0), max((abs(f) - b) / 2, (abs(e) - sqrt(ad)) / 2));
}

double concurrence(const TwoSiteState& s);
ConcurrenceBranch active_branch(const TwoSiteState& s);

/// General two-qubit concurrence: max{0, l1 - l2 - l3 - l4}, l_i the
/// decreasing singular values of sqrt(rho) sqrt(rho~) with
/// rho~ = (sy x sy) rho* (sy x sy). Throws InvalidInput unless rho is
/// Hermitian, unit trace and PSD within 1e-9.
double wootters_concurrence(const Eigen::Matrix4cd& rho);

struct EntanglementProfile {
    ModelParams params{};
    std::vector<double> c_d;    ///< C_d for d = 1 .. size
    std::vector<double> tau_d;  ///< C_d^2
    std::vector<int> branch;    ///< ConcurrenceBranch per d, as int
    std::vector<double> c_partial;    ///< C^N = 2 sum_{d<=N} C_d
    std::vector<double> tau_partial;  ///< tau^N = 2 sum_{d<=N} tau_d
    int d_max = 0;        ///< requested
    int xi_cut = 0;       ///< max{d : C_d > 1e-8}, 0 if none
    double xi_fit = 0.0;  ///< -1/slope of ln C_d over C_d > 1e-10 (NaN if < 2 points)
    double c_inf = 0.0;
    double tau_inf = 0.0;
    double c_inf_error = 0.0;  ///< geometric tail estimate beyond the last d
    bool converged = false;    ///< C at the last evaluated d below 1e-12

    [[nodiscard]] int evaluated() const { return static_cast<int>(c_d.size()); }
    [[nodiscard]] double c(int d) const { return c_d.at(static_cast<std::size_t>(d - 1)); }
    /// C^N and tau^N; N beyond the evaluated range returns the converged total.
    [[nodiscard]] double c_total(int n) const;
    [[nodiscard]] double tau_total(int n) const;
};

inline constexpr double kSupportThreshold = 1e-8;
inline constexpr double kFitThreshold = 1e-10;
inline constexpr double kConvergedThreshold = 1e-12;

/// C_d for d = 1..d_max. With tail_run > 0 evaluation stops early once the
/// last tail_run values (and at least xi_cut of them) are all exactly zero.
EntanglementProfile entanglement_profile(const ModelParams& p, int d_max, const QuadratureConfig& q = {},
                                         int tail_run = 0);

/// Same from an existing table (tbl.x_max() >= d_max).
EntanglementProfile entanglement_profile(const CorrelatorTable& tbl, int d_max, int tail_run = 0);

/// Profile statistics for a given concurrence sequence (synthetic data, tests).
EntanglementProfile profile_from_concurrences(std::vector<double> c_d);

/// Least squares of ln C_d against d over [d_lo, d_hi], skipping C_d <= 1e-10.
LinearFit log_decay_fit(const EntanglementProfile& prof, int d_lo, int d_hi);

/// Exponential regime ahead of the sharp drop at the truncation length:
/// d in [1, ceil(xi_cut / 2)] (at least [1, 2] when xi_cut >= 2).
struct DecayWindow {
    int lo = 1;
    int hi = 1;
};
DecayWindow exponential_regime(const EntanglementProfile& prof);

struct MonogamyReport {
    bool ckw_holds = true;       ///< tau^N <= 1 for all N
    bool sqrt_holds = true;      ///< C^N <= sqrt(N - 1) for all N >= 2
    double ckw_margin = 1.0;     ///< min_N (1 - tau^N)
    double sqrt_margin = 0.0;    ///< min_{N>=2} (sqrt(N - 1) - C^N)
    int worst_sqrt_n = 0;
    std::vector<std::string> findings;
};

MonogamyReport check_monogamy(const EntanglementProfile& prof);

inline constexpr double kKbiMinXi = 5.0;

struct KbiReport {
    double r1 = 0.0;      ///< C_inf / (2 xi_fit tau_inf)
    double r2 = 0.0;      ///< tau_inf * xi_fit
    double r1_cut = 0.0;  ///< C_inf / (2 xi_cut tau_inf), supplementary
    bool within_band = false;  ///< r1 in [0.5, 2]
};

/// Throws InvalidInput when xi_fit < 5 (outside the asymptotic regime).
KbiReport check_kbi_relation(const EntanglementProfile& prof);

/// LMG closed form C_d = (1 - sqrt((1 - l) / (1 - g l))) / (N - 1).
double lmg_reference_concurrence(double lambda, double gamma, int n);

}  // namespace lrk
