#include "lrk/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "lrk/entanglement.hpp"

namespace lrk {

using cd = std::complex<double>;

void RingConfig::validate() const {
    params.validate();
    if (n_sites < 4 || n_sites % 2 != 0) throw InvalidInput("ring size must be even and >= 4");
    const int r = effective_range();
    if (r < 1 || r >= n_sites / 2) throw InvalidInput("range_cut must lie in [1, n_sites / 2)");
}

namespace {

long fold(long r, long n) {
    r %= n;
    if (r < 0) r += n;
    if (r > n / 2) r -= n;
    return r;
}

}  // namespace

double ring_hopping(long r, const RingConfig& cfg) {
    const long f = fold(r, cfg.n_sites);
    if (f == 0 || std::abs(f) > cfg.effective_range()) return 0.0;
    return hopping<double>(f, cfg.params);
}

double ring_pairing(long r, const RingConfig& cfg) {
    const long f = fold(r, cfg.n_sites);
    if (f == 0 || std::abs(f) > cfg.effective_range()) return 0.0;
    return (f > 0 ? -1.0 : 1.0) * pairing<double>(f, cfg.params);
}

Eigen::MatrixXd bdg_matrix(const RingConfig& cfg) {
    cfg.validate();
    const int n = cfg.n_sites;
    Eigen::MatrixXd a(n, n), b(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            a(i, j) = (i == j ? cfg.params.mu : 0.0) + ring_hopping(i - j, cfg);
            b(i, j) = ring_pairing(i - j, cfg);
        }
    }
    Eigen::MatrixXd m(2 * n, 2 * n);
    m << a, b, -b, -a;
    return m;
}

namespace {

GroundStateCorrelations momentum_solve(const RingConfig& cfg) {
    const int n = cfg.n_sites;
    const int range = cfg.effective_range();
    std::vector<double> occ(n), anom(n);
    double min_e = std::numeric_limits<double>::infinity();
    for (int m = 0; m < n; ++m) {
        const double k = 2.0 * std::numbers::pi * m / n;
        double e1 = cfg.params.mu;
        double e2 = 0.0;
        for (int d = 1; d <= range; ++d) {
            e1 += 2.0 * hopping<double>(d, cfg.params) * std::cos(k * d);
            e2 += 2.0 * pairing<double>(d, cfg.params) * std::sin(k * d);
        }
        const double e = std::hypot(e1, e2);
        min_e = std::min(min_e, e);
        occ[m] = e > 0.0 ? 0.5 * (1.0 - e1 / e) : 0.5;
        anom[m] = e > 0.0 ? e2 / (2.0 * e) : 0.0;
    }
    if (min_e < kDegeneracyTolerance * std::abs(cfg.params.t)) {
        throw NumericalFailure("degenerate ring ground state for " + to_string(cfg.params));
    }
    // Correlations depend on r = j - i only.
    std::vector<double> hop_r(n), pair_r(n);
    for (int r = 0; r < n; ++r) {
        double h = 0.0, f = 0.0;
        for (int m = 0; m < n; ++m) {
            // k r taken mod 2 pi in integer arithmetic to keep the phase exact.
            const double kr = 2.0 * std::numbers::pi * static_cast<double>((static_cast<long>(m) * r) % n) / n;
            h += std::cos(kr) * occ[m];
            f += std::sin(kr) * anom[m];
        }
        hop_r[r] = h / n;
        pair_r[r] = f / n;  // <c_i c_{i+r}> = -(1/N) sum sin(k (i - j)) eps2 / 2E
    }
    GroundStateCorrelations gs;
    gs.hop.resize(n, n);
    gs.pair.resize(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const int r = ((j - i) % n + n) % n;
            gs.hop(i, j) = hop_r[r];
            gs.pair(i, j) = pair_r[r];
        }
    }
    gs.min_energy = min_e;
    gs.params = cfg.params;
    return gs;
}

GroundStateCorrelations dense_solve(const RingConfig& cfg) {
    const int n = cfg.n_sites;
    if (n > 1024) throw InvalidInput("dense ring solver is limited to 1024 sites");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(bdg_matrix(cfg));
    if (es.info() != Eigen::Success) throw NumericalFailure("BdG eigensolver failed");
    const auto& ev = es.eigenvalues();
    const double min_e = ev.cwiseAbs().minCoeff();
    if (min_e < kDegeneracyTolerance * std::abs(cfg.params.t)) {
        throw NumericalFailure("degenerate ring ground state for " + to_string(cfg.params));
    }
    // Ascending order; the upper half is the positive branch.
    const Eigen::MatrixXd vp = es.eigenvectors().rightCols(n);
    const Eigen::MatrixXd gamma = vp * vp.transpose();
    GroundStateCorrelations gs;
    gs.hop = Eigen::MatrixXd::Identity(n, n) - gamma.topLeftCorner(n, n).transpose();
    gs.pair = gamma.topRightCorner(n, n);
    gs.min_energy = min_e;
    gs.params = cfg.params;
    return gs;
}

}  // namespace

GroundStateCorrelations diagonalize_ring(const RingConfig& cfg, RingSolver solver) {
    cfg.validate();
    return solver == RingSolver::momentum ? momentum_solve(cfg) : dense_solve(cfg);
}

double ring_g(const GroundStateCorrelations& gs, long x, int site) {
    const long n = gs.n_sites();
    const long i = ((site % n) + n) % n;
    const long j = (((i + x) % n) + n) % n;
    return (x == 0 ? -1.0 : 0.0) + 2.0 * gs.hop(i, j) + 2.0 * gs.pair(i, j);
}

CorrelatorTable ring_correlator_table(const GroundStateCorrelations& gs, int x_max) {
    if (x_max < 0 || x_max + 1 >= gs.n_sites() / 2) throw InvalidInput("ring too small for requested x_max");
    std::vector<double> values;
    for (long x = -(x_max + 1); x <= x_max + 1; ++x) values.push_back(ring_g(gs, x));
    return CorrelatorTable(gs.params, x_max, std::move(values));
}

MajoranaWord canonical(MajoranaWord w) {
    auto& v = w.ops;
    for (std::size_t pass = 0; pass < v.size(); ++pass) {
        bool swapped = false;
        for (std::size_t k = 0; k + 1 < v.size(); ++k) {
            if (v[k] > v[k + 1]) {
                std::swap(v[k], v[k + 1]);
                w.coeff = -w.coeff;
                swapped = true;
            }
        }
        if (!swapped) break;
    }
    std::vector<int> out;
    for (int op : v) {
        if (!out.empty() && out.back() == op) {
            out.pop_back();
        } else {
            out.push_back(op);
        }
    }
    v = std::move(out);
    return w;
}

std::complex<double> majorana_pair(const GroundStateCorrelations& gs, int p, int q) {
    const int l = p / 2, m = q / 2;
    // gamma = u c + v c^dag
    const cd i1(0.0, 1.0);
    const cd up = p % 2 == 0 ? cd(1.0) : -i1, vp = p % 2 == 0 ? cd(1.0) : i1;
    const cd uq = q % 2 == 0 ? cd(1.0) : -i1, vq = q % 2 == 0 ? cd(1.0) : i1;
    const double cc = gs.pair(l, m);
    const double cdc = gs.hop(l, m);
    const double ccd = (l == m ? 1.0 : 0.0) - gs.hop(m, l);
    const double cdcd = gs.pair(m, l);
    return up * uq * cc + up * vq * ccd + vp * uq * cdc + vp * vq * cdcd;
}

std::complex<double> expectation(const GroundStateCorrelations& gs, const MajoranaWord& w) {
    const auto c = canonical(w);
    const auto n = static_cast<Eigen::Index>(c.ops.size());
    if (n == 0) return c.coeff;
    if (n % 2 != 0) return 0.0;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index s = r + 1; s < n; ++s) {
            m(r, s) = majorana_pair(gs, c.ops[r], c.ops[s]);
            m(s, r) = -m(r, s);
        }
    }
    return c.coeff * pfaffian<cd>(std::move(m));
}

namespace {

void append_local(MajoranaWord& w, int site, int op) {
    switch (op) {
        case 1: w.ops.push_back(2 * site); break;
        case 2: w.ops.push_back(2 * site + 1); break;
        case 3:
            w.coeff *= cd(0.0, -1.0);
            w.ops.push_back(2 * site);
            w.ops.push_back(2 * site + 1);
            break;
        default: break;
    }
}

}  // namespace

std::complex<double> spin_correlator(const GroundStateCorrelations& gs, int i, int a, int j, int b) {
    if (a < 0 || a > 3 || b < 0 || b > 3) throw InvalidInput("Pauli index must be in 0..3");
    if (i == j) throw InvalidInput("spin_correlator needs distinct sites");
    if (i > j) {
        std::swap(i, j);
        std::swap(a, b);
    }
    const bool string_a = a == 1 || a == 2;
    const bool string_b = b == 1 || b == 2;
    if (string_a != string_b) return 0.0;
    MajoranaWord w;
    append_local(w, i, a);
    if (string_a) {
        for (int m = i; m < j; ++m) append_local(w, m, 3);
    }
    append_local(w, j, b);
    return expectation(gs, w);
}

Eigen::Matrix4cd wick_two_site(const GroundStateCorrelations& gs, int i, int j) {
    const int n = gs.n_sites();
    if (i < 0 || j < 0 || i >= n || j >= n || i == j) throw InvalidInput("wick_two_site: invalid sites");
    if (std::abs(i - j) > 64) throw InvalidInput("wick_two_site: |i - j| must be <= 64");
    std::array<Eigen::Matrix2cd, 4> pauli;
    pauli[0] << 1, 0, 0, 1;
    pauli[1] << 0, 1, 1, 0;
    pauli[2] << 0, cd(0, -1), cd(0, 1), 0;
    pauli[3] << 1, 0, 0, -1;
    Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            const cd v = (a == 0 && b == 0) ? cd(1.0) : spin_correlator(gs, i, a, j, b);
            if (v == cd(0.0)) continue;
            for (int r = 0; r < 2; ++r)
                for (int s = 0; s < 2; ++s) rho.block<2, 2>(2 * r, 2 * s) += 0.25 * v * pauli[a](r, s) * pauli[b];
        }
    }
    return rho;
}

Eigen::Matrix4cd wick_two_site(const RingConfig& cfg, int i, int j) {
    return wick_two_site(diagonalize_ring(cfg), i, j);
}

bool OracleReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

namespace {

void add(OracleReport& r, std::string name, double err, double tol) {
    r.checks.push_back({std::move(name), err, tol, err <= tol});
}

double x_state_leak(const Eigen::Matrix4cd& rho) {
    double worst = 0.0;
    for (int r = 0; r < 4; ++r) {
        for (int s = 0; s < 4; ++s) {
            const bool allowed = r == s || r + s == 3;
            if (!allowed) worst = std::max(worst, std::abs(rho(r, s)));
        }
    }
    return worst;
}

}  // namespace

OracleReport oracle_validation(const ModelParams& p, int n_sites, int x_max, int d_max, const QuadratureConfig& q) {
    if (d_max < 1 || d_max > 64) throw InvalidInput("oracle d_max must lie in [1, 64]");
    if (x_max < d_max) x_max = d_max;
    RingConfig cfg;
    cfg.n_sites = n_sites;
    cfg.params = p;
    cfg.validate();
    if (x_max + 1 >= n_sites / 2) throw InvalidInput("ring too small for requested x_max");

    OracleReport report;
    report.params = p;
    report.n_sites = n_sites;

    const auto gs = diagonalize_ring(cfg, RingSolver::momentum);

    if (n_sites <= 1024) {
        const auto dense = diagonalize_ring(cfg, RingSolver::dense);
        const double err = std::max((gs.hop - dense.hop).cwiseAbs().maxCoeff(),
                                    (gs.pair - dense.pair).cwiseAbs().maxCoeff());
        add(report, "momentum_vs_dense", err, 1e-12);

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(bdg_matrix(cfg), Eigen::EigenvaluesOnly);
        const auto& ev = es.eigenvalues();
        double ph = 0.0;
        for (Eigen::Index k = 0; k < ev.size(); ++k) ph = std::max(ph, std::abs(ev(k) + ev(ev.size() - 1 - k)));
        add(report, "particle_hole_spectrum", ph, 1e-12 * std::max(1.0, ev.cwiseAbs().maxCoeff()));
    }

    const auto tbl = correlator_table(p, x_max, q);
    double g_err = 0.0;
    for (long x = -x_max; x <= x_max; ++x) g_err = std::max(g_err, std::abs(ring_g(gs, x) - tbl(x)));
    add(report, "ring_vs_quadrature_g", g_err, 1e-4);

    double c_err = 0.0, phys = 0.0, leak = 0.0, shift = 0.0;
    for (int d = 1; d <= d_max; ++d) {
        const auto rho = wick_two_site(gs, 0, d);
        c_err = std::max(c_err, std::abs(concurrence(two_site_state(d, tbl)) - wootters_concurrence(rho)));
        phys = std::max(phys, std::abs(rho.trace() - 1.0));
        phys = std::max(phys, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho, Eigen::EigenvaluesOnly);
        phys = std::max(phys, -es.eigenvalues().minCoeff());
        leak = std::max(leak, x_state_leak(rho));
        for (int i : {n_sites / 3, n_sites / 2 - d}) {
            shift = std::max(shift, (wick_two_site(gs, i, i + d) - rho).cwiseAbs().maxCoeff());
        }
    }
    add(report, "closed_form_vs_wick_concurrence", c_err, 1e-4);
    add(report, "wick_trace_hermitian_psd", phys, 1e-9);
    add(report, "wick_x_state_structure", leak, 1e-8);
    add(report, "translational_invariance", shift, 1e-10);
    return report;
}

}  // namespace lrk
