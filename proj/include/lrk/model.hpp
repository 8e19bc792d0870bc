#pragma once

// Long-range p-wave chain: couplings, momentum-space dispersion, global gap
// and analytic phase boundaries.
//
// Couplings between sites at separation d >= 1:
//   t(d) = t exp(-alpha d + alpha),  Delta(d) = Delta exp(-beta d + beta)
// Resummed in momentum space they give
//   eps1(k) = mu + 2 sum_d t(d) cos(kd),  eps2(k) = 2 sum_d Delta(d) sin(kd).

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "lrk/errors.hpp"

namespace lrk {

struct ModelParams {
    double mu = 0.0;
    double t = 1.0;
    double delta = 1.0;
    double alpha = 1.0;
    double beta = 1.0;

    /// Throws InvalidInput unless alpha > 0, beta > 0, t != 0 and all fields
    /// are finite.
    void validate() const;

    /// Same couplings with beta tied to alpha.
    [[nodiscard]] ModelParams with_locked_decay() const {
        ModelParams p = *this;
        p.beta = p.alpha;
        return p;
    }

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

std::string to_string(const ModelParams& p);

/// Hopping amplitude t(d) for |d| >= 1.
template <typename Scalar>
Scalar hopping(long d, const ModelParams& p) {
    using std::exp;
    const Scalar a = static_cast<Scalar>(p.alpha);
    return static_cast<Scalar>(p.t) * exp(-a * static_cast<Scalar>(std::abs(d)) + a);
}

/// Pairing amplitude Delta(d) for |d| >= 1.
template <typename Scalar>
Scalar pairing(long d, const ModelParams& p) {
    using std::exp;
    const Scalar b = static_cast<Scalar>(p.beta);
    return static_cast<Scalar>(p.delta) * exp(-b * static_cast<Scalar>(std::abs(d)) + b);
}

namespace detail {

// cosh(r) - cos(k) = 2 sinh^2(r/2) + 2 sin^2(k/2), free of cancellation when
// both r and k are small.
template <typename Scalar>
Scalar decay_denominator(Scalar r, Scalar k) {
    using std::sin;
    using std::sinh;
    const Scalar sr = sinh(r / 2);
    const Scalar sk = sin(k / 2);
    return 2 * (sr * sr + sk * sk);
}

}  // namespace detail

/// eps1(k) = mu + t e^a (sinh a - cosh a + cos k) / (cosh a - cos k).
template <typename Scalar>
Scalar epsilon1(Scalar k, const ModelParams& p) {
    using std::exp;
    using std::expm1;
    using std::sin;
    const Scalar a = static_cast<Scalar>(p.alpha);
    const Scalar sk = sin(k / 2);
    // sinh a - cosh a + cos k = (1 - e^{-a}) - 2 sin^2(k/2)
    const Scalar numer = -expm1(-a) - 2 * sk * sk;
    return static_cast<Scalar>(p.mu) +
           static_cast<Scalar>(p.t) * exp(a) * numer / detail::decay_denominator(a, k);
}

/// eps2(k) = Delta e^b sin k / (cosh b - cos k).
template <typename Scalar>
Scalar epsilon2(Scalar k, const ModelParams& p) {
    using std::exp;
    using std::sin;
    const Scalar b = static_cast<Scalar>(p.beta);
    return static_cast<Scalar>(p.delta) * exp(b) * sin(k) / detail::decay_denominator(b, k);
}

template <typename Scalar>
struct DispersionSample {
    Scalar k;
    Scalar eps1;
    Scalar eps2;
    Scalar energy;  ///< positive branch sqrt(eps1^2 + eps2^2)
};

template <typename Scalar>
DispersionSample<Scalar> band_energy(Scalar k, const ModelParams& p) {
    using std::hypot;
    const Scalar e1 = epsilon1(k, p);
    const Scalar e2 = epsilon2(k, p);
    return {k, e1, e2, hypot(e1, e2)};
}

/// Gap is considered closed below this many units of |t|.
inline constexpr double kGapClosedThreshold = 1e-6;

struct GapResult {
    double gap = 0.0;     ///< min_k 2E(k)
    double k_min = 0.0;   ///< argmin in [0, pi] (E is even in k)
    bool closed = false;  ///< gap < kGapClosedThreshold * |t|
    /// Closed at a momentum away from 0 and pi, i.e. a closing not described
    /// by the analytic boundaries.
    bool interior_closing = false;
};

/// Dense grid over [0, pi] with golden-section refinement around the three
/// lowest grid minima. k_resolution >= 64.
GapResult global_gap(const ModelParams& p, int k_resolution = 4096);

enum class BoundaryBranch {
    plus,   ///< alpha* = ln(mu / (2t + mu)), gap closes at k = 0
    minus,  ///< alpha* = ln(mu / (2t - mu)), gap closes at k = pi
};

struct PhaseBoundary {
    double alpha_star = 0.0;
    BoundaryBranch branch = BoundaryBranch::plus;
    double closing_momentum = 0.0;
};

std::string to_string(BoundaryBranch b);

/// Critical decay rates alpha* > 0 for the given mu and t (independent of
/// beta and Delta). Empty when neither branch has a real positive solution.
std::vector<PhaseBoundary> phase_boundary(const ModelParams& p);

/// The same boundaries solved for mu at fixed alpha: eps1(0) = 0 gives the
/// plus branch, eps1(pi) = 0 the minus branch. Always two entries.
struct CriticalMu {
    double mu_star;
    BoundaryBranch branch;
    double closing_momentum;
};
std::vector<CriticalMu> critical_mu(const ModelParams& p);

}  // namespace lrk
