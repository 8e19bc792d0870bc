#include "lrk/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

namespace lrk {

Eigen::Matrix4d TwoSiteState::matrix() const {
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    m(0, 0) = a;
    m(1, 1) = b;
    m(2, 2) = b;
    m(3, 3) = rho_dd;
    m(0, 3) = m(3, 0) = f;
    m(1, 2) = m(2, 1) = e;
    return 0.25 * m;
}

double TwoSiteState::positivity_violation() const {
    const double ad = std::max(a, 0.0) * std::max(rho_dd, 0.0);
    return std::max({-a, -rho_dd, -b, std::abs(f) - std::sqrt(ad), std::abs(e) - b});
}

TwoSiteState two_site_state(const PCoefficients& c) {
    TwoSiteState s;
    s.d = c.d;
    s.a = c.p00 + 2.0 * c.pz0 + c.pzz;
    s.rho_dd = c.p00 - 2.0 * c.pz0 + c.pzz;
    s.b = c.p00 - c.pzz;
    s.e = c.pxx + c.pyy;
    s.f = c.pxx - c.pyy;

    const double violation = s.positivity_violation();
    if (violation > kPositivityTolerance) {
        std::ostringstream os;
        os << "non-physical two-site state at d = " << c.d << " (positivity violated by " << violation
           << "); correlator table or determinant is inaccurate";
        throw NumericalFailure(os.str());
    }
    if (violation > 0.0) {
        s.a = std::max(s.a, 0.0);
        s.rho_dd = std::max(s.rho_dd, 0.0);
        s.b = std::max(s.b, 0.0);
        s.e = std::copysign(std::min(std::abs(s.e), s.b), s.e);
        s.f = std::copysign(std::min(std::abs(s.f), std::sqrt(s.a * s.rho_dd)), s.f);
    }
    return s;
}

TwoSiteState two_site_state(int d, const CorrelatorTable& tbl) { return two_site_state(p_coefficients(d, tbl)); }

double concurrence(const TwoSiteState& s) { return x_state_concurrence(s.a, s.rho_dd, s.b, s.e, s.f); }

ConcurrenceBranch active_branch(const TwoSiteState& s) {
    const double fb = 0.5 * (std::abs(s.f) - s.b);
    const double eb = 0.5 * (std::abs(s.e) - std::sqrt(std::max(s.a * s.rho_dd, 0.0)));
    if (fb <= 0.0 && eb <= 0.0) return ConcurrenceBranch::none;
    return fb >= eb ? ConcurrenceBranch::f_branch : ConcurrenceBranch::e_branch;
}

double wootters_concurrence(const Eigen::Matrix4cd& rho) {
    constexpr double kTol = 1e-9;
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kTol) throw InvalidInput("wootters_concurrence: rho not Hermitian");
    if (std::abs(rho.trace() - 1.0) > kTol) throw InvalidInput("wootters_concurrence: trace differs from 1");

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> eig(rho);
    Eigen::Vector4d w = eig.eigenvalues();
    if (w.minCoeff() < -kTol) throw InvalidInput("wootters_concurrence: rho not positive semidefinite");
    w = w.cwiseMax(0.0).cwiseSqrt();
    const Eigen::Matrix4cd sqrt_rho = eig.eigenvectors() * w.asDiagonal() * eig.eigenvectors().adjoint();

    // sigma_y (x) sigma_y is real, symmetric and its own inverse.
    Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
    yy(0, 3) = yy(3, 0) = -1.0;
    yy(1, 2) = yy(2, 1) = 1.0;
    const Eigen::Matrix4cd sqrt_flipped = yy * sqrt_rho.conjugate() * yy;

    Eigen::JacobiSVD<Eigen::Matrix4cd> svd(sqrt_rho * sqrt_flipped);
    const Eigen::Vector4d l = svd.singularValues();  // decreasing
    return std::max(0.0, l(0) - l(1) - l(2) - l(3));
}

double EntanglementProfile::c_total(int n) const {
    if (n < 1) return 0.0;
    if (c_partial.empty()) return 0.0;
    return c_partial[static_cast<std::size_t>(std::min(n, evaluated()) - 1)];
}

double EntanglementProfile::tau_total(int n) const {
    if (n < 1) return 0.0;
    if (tau_partial.empty()) return 0.0;
    return tau_partial[static_cast<std::size_t>(std::min(n, evaluated()) - 1)];
}

namespace {

void fill_statistics(EntanglementProfile& prof) {
    const auto n = prof.c_d.size();
    prof.tau_d.resize(n);
    prof.c_partial.resize(n);
    prof.tau_partial.resize(n);
    double c_sum = 0.0, tau_sum = 0.0;
    prof.xi_cut = 0;
    std::vector<double> fx, fy;
    for (std::size_t i = 0; i < n; ++i) {
        const double c = prof.c_d[i];
        prof.tau_d[i] = c * c;
        c_sum += c;
        tau_sum += prof.tau_d[i];
        prof.c_partial[i] = 2.0 * c_sum;
        prof.tau_partial[i] = 2.0 * tau_sum;
        const int d = static_cast<int>(i) + 1;
        if (c > kSupportThreshold) prof.xi_cut = d;
        if (c > kFitThreshold) {
            fx.push_back(d);
            fy.push_back(std::log(c));
        }
    }
    prof.c_inf = n ? prof.c_partial.back() : 0.0;
    prof.tau_inf = n ? prof.tau_partial.back() : 0.0;

    prof.xi_fit = std::numeric_limits<double>::quiet_NaN();
    if (fx.size() >= 2) {
        const double slope = fit_line(fx, fy).slope;
        prof.xi_fit = slope < 0.0 ? -1.0 / slope : std::numeric_limits<double>::infinity();
    }

    const double last = n ? prof.c_d.back() : 0.0;
    prof.converged = n > 0 && last < kConvergedThreshold;
    if (last == 0.0) {
        prof.c_inf_error = 0.0;
    } else if (std::isfinite(prof.xi_fit)) {
        const double q = std::exp(-1.0 / prof.xi_fit);
        prof.c_inf_error = 2.0 * last * q / (1.0 - q);
    } else {
        prof.c_inf_error = std::numeric_limits<double>::infinity();
    }
}

}  // namespace

EntanglementProfile entanglement_profile(const CorrelatorTable& tbl, int d_max, int tail_run) {
    if (d_max < 2) throw InvalidInput("entanglement_profile: d_max must be >= 2");
    if (tbl.x_max() < d_max) throw InvalidInput("entanglement_profile: table too short for d_max");
    EntanglementProfile prof;
    prof.params = tbl.params();
    prof.d_max = d_max;
    int zero_run = 0;
    int support = 0;
    for (int d = 1; d <= d_max; ++d) {
        const auto s = two_site_state(d, tbl);
        const double c = concurrence(s);
        prof.c_d.push_back(c);
        prof.branch.push_back(static_cast<int>(active_branch(s)));
        if (c > kSupportThreshold) support = d;
        zero_run = c == 0.0 ? zero_run + 1 : 0;
        if (tail_run > 0 && zero_run >= tail_run && zero_run >= support) break;
    }
    fill_statistics(prof);
    return prof;
}

EntanglementProfile entanglement_profile(const ModelParams& p, int d_max, const QuadratureConfig& q, int tail_run) {
    if (d_max < 2) throw InvalidInput("entanglement_profile: d_max must be >= 2");
    return entanglement_profile(correlator_table(p, d_max, q), d_max, tail_run);
}

EntanglementProfile profile_from_concurrences(std::vector<double> c_d) {
    EntanglementProfile prof;
    prof.d_max = static_cast<int>(c_d.size());
    prof.c_d = std::move(c_d);
    prof.branch.assign(prof.c_d.size(), static_cast<int>(ConcurrenceBranch::none));
    fill_statistics(prof);
    return prof;
}

LinearFit log_decay_fit(const EntanglementProfile& prof, int d_lo, int d_hi) {
    d_lo = std::max(d_lo, 1);
    d_hi = std::min(d_hi, prof.evaluated());
    std::vector<double> x, y;
    for (int d = d_lo; d <= d_hi; ++d) {
        const double c = prof.c(d);
        if (c > kFitThreshold) {
            x.push_back(d);
            y.push_back(std::log(c));
        }
    }
    return fit_line(x, y);
}

DecayWindow exponential_regime(const EntanglementProfile& prof) {
    const int half = (prof.xi_cut + 1) / 2;
    return {1, std::max(half, std::min(2, prof.xi_cut))};
}

MonogamyReport check_monogamy(const EntanglementProfile& prof) {
    MonogamyReport r;
    r.sqrt_margin = std::numeric_limits<double>::infinity();
    constexpr double kSlack = 1e-12;
    for (int n = 1; n <= prof.evaluated(); ++n) {
        const double tau = prof.tau_total(n);
        r.ckw_margin = std::min(r.ckw_margin, 1.0 - tau);
        if (tau > 1.0 + kSlack && r.ckw_holds) {
            r.ckw_holds = false;
            r.findings.push_back("tau^" + std::to_string(n) + " = " + std::to_string(tau) + " exceeds 1");
        }
        if (n >= 2) {
            const double bound = std::sqrt(static_cast<double>(n - 1));
            const double margin = bound - prof.c_total(n);
            if (margin < r.sqrt_margin) {
                r.sqrt_margin = margin;
                r.worst_sqrt_n = n;
            }
            if (margin < -kSlack && r.sqrt_holds) {
                r.sqrt_holds = false;
                r.findings.push_back("C^" + std::to_string(n) + " = " + std::to_string(prof.c_total(n)) +
                                     " exceeds sqrt(N-1) = " + std::to_string(bound));
            }
        }
    }
    return r;
}

KbiReport check_kbi_relation(const EntanglementProfile& prof) {
    if (!(prof.xi_fit >= kKbiMinXi)) {
        throw InvalidInput("check_kbi_relation: xi_fit = " + std::to_string(prof.xi_fit) +
                           " is below 5, outside the asymptotic regime");
    }
    KbiReport r;
    r.r1 = prof.c_inf / (2.0 * prof.xi_fit * prof.tau_inf);
    r.r2 = prof.tau_inf * prof.xi_fit;
    r.r1_cut = prof.xi_cut > 0 ? prof.c_inf / (2.0 * prof.xi_cut * prof.tau_inf)
                               : std::numeric_limits<double>::quiet_NaN();
    r.within_band = r.r1 >= 0.5 && r.r1 <= 2.0;
    return r;
}

double lmg_reference_concurrence(double lambda, double gamma, int n) {
    if (!(lambda < 1.0) || !(gamma * lambda < 1.0) || n < 2) {
        throw InvalidInput("lmg_reference_concurrence: requires lambda < 1, gamma*lambda < 1, N >= 2");
    }
    return (1.0 - std::sqrt((1.0 - lambda) / (1.0 - gamma * lambda))) / static_cast<double>(n - 1);
}

}  // namespace lrk
