#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lrk/criticality.hpp"
#include "lrk/entanglement.hpp"
#include "lrk/fit.hpp"

using namespace lrk;

namespace {

const ModelParams kCritical{-23.23722, 1.0, 1.3, 0.09, 0.027};

double c_d(int d, const ModelParams& p, const QuadratureConfig& q) {
    return concurrence(two_site_state(d, correlator_table(p, d, q)));
}

}  // namespace

TEST_CASE("derivative is smooth far from the transition") {
    const ModelParams p{-5.0, 1.0, 1.3, 1.5, 1.0};
    const auto h = dC_dalpha(1, p, 1e-4);
    const auto h2 = dC_dalpha(1, p, 0.5e-4);
    CHECK(h.reliable);
    CHECK_FALSE(h.kink);
    CHECK(std::abs(h.value - h2.value) < 0.1 * std::abs(h.value));
}

TEST_CASE("derivative matches a five-point quadratic fit") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const QuadratureConfig q = CriticalityConfig{}.quad;
    int tested = 0;
    while (tested < 50) {
        const ModelParams p{-8 + 10 * u(rng), 1.0, 0.5 + u(rng), 0.3 + 1.5 * u(rng), 0.3 + 1.5 * u(rng)};
        if (global_gap(p).gap < 0.1) continue;
        const auto est = dC_dalpha(1, p);
        if (est.kink || c_d(1, p, q) < 1e-3) continue;
        const double h = 2e-5;
        std::vector<double> xs, ys;
        for (int j = -2; j <= 2; ++j) {
            ModelParams s = p;
            s.alpha += j * h;
            xs.push_back(j * h);
            ys.push_back(c_d(1, s, q));
        }
        // Symmetric five-point quadratic least squares: slope = sum j y / (h sum j^2).
        double num = 0.0;
        for (int j = 0; j < 5; ++j) num += xs[j] * ys[j];
        const double slope = num / (10.0 * h * h);
        CHECK(std::abs(slope - est.value) <= 10.0 * est.error + 1e-6);
        ++tested;
    }
}

TEST_CASE("|dC_d/dalpha| grows towards alpha* from both sides") {
    const double astar = critical_value(kCritical, ScanAxis::alpha);
    CHECK(astar == doctest::Approx(0.09).epsilon(1e-6));
    for (int d : {1, 5}) {
        for (double sign : {1.0, -1.0}) {
            double prev = 0.0;
            for (double lx : {-4.0, -6.0, -8.0, -10.0}) {
                ModelParams p = kCritical;
                p.alpha = astar + sign * std::exp(lx);
                const double v = std::abs(dC_dalpha(d, p).value);
                CHECK(v > prev);
                prev = v;
            }
        }
    }
}

TEST_CASE("divergence locus sits at the analytic alpha*") {
    const double astar = critical_value(kCritical, ScanAxis::alpha);
    const double lo = 0.085, hi = 0.095;
    const int n = 101;
    const double step = (hi - lo) / (n - 1);
    const double peak = derivative_peak(kCritical, 1, lo, hi, n);
    CHECK(std::abs(peak - astar) <= 2.0 * step);
}

TEST_CASE("log-divergence fits near alpha = 0.09") {
    const auto above = log_divergence_scan(kCritical, 8, Side::above);
    const auto below = log_divergence_scan(kCritical, 8, Side::below);
    REQUIRE(above.fits.size() == 8);
    REQUIRE(below.fits.size() == 8);
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(std::abs(above.fits[i].correlation) > 0.98);
        CHECK(std::abs(below.fits[i].correlation) > 0.98);
        CHECK(above.fits[i].critical == below.fits[i].critical);
        // The sides agree to a few percent; the residual difference shrinks as
        // the window moves towards alpha*, so it is systematic rather than noise.
        CHECK(std::abs(above.fits[i].k_d - below.fits[i].k_d) < 0.05 * std::abs(above.fits[i].k_d));
        CHECK(above.fits[i].window_hi < std::log(0.05));
    }
    const auto kd = kd_linear_fit(above.fits);
    CHECK(kd.q > 0.0);
    CHECK(std::abs(kd.correlation) > 0.98);
    CHECK_FALSE(kd.nonlinear);
    CHECK(kd.q == doctest::Approx(0.0012).epsilon(0.5));
    CHECK(kd.q_prime == doctest::Approx(-0.022).epsilon(0.5));
}

TEST_CASE("window shifts of +-1 move k_d by less than 20%") {
    const auto base = log_divergence_scan(kCritical, 4, Side::above);
    for (double shift : {-1.0, 1.0}) {
        const LogWindow w{-11.0 + shift, -8.0 + shift, 12};
        const auto moved = log_divergence_scan(kCritical, 4, Side::above, w);
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(std::abs(moved.fits[i].k_d - base.fits[i].k_d) < 0.2 * std::abs(base.fits[i].k_d));
        }
    }
}

TEST_CASE("the same scaling form holds along mu") {
    const ModelParams p{-11.0, 1.0, 1.3, 0.2, 0.027};
    CriticalityConfig cfg;
    cfg.axis = ScanAxis::mu;
    const double mstar = critical_value(p, ScanAxis::mu);
    CHECK(mstar == doctest::Approx(-2.0 / (1.0 - std::exp(-0.2))).epsilon(1e-12));
    const auto scan = log_divergence_scan(p, 4, Side::above, {}, cfg);
    for (const auto& f : scan.fits) CHECK(std::abs(f.correlation) > 0.98);
    const auto kd = kd_linear_fit(scan.fits);
    CHECK(std::abs(kd.correlation) > 0.98);
}

TEST_CASE("fit identities on synthetic data") {
    std::vector<double> x, y;
    for (int i = 0; i < 12; ++i) {
        x.push_back(-11.0 + 0.25 * i);
        y.push_back(-0.0173 * x.back() + 0.42);
    }
    const auto f = fit_line(x, y);
    CHECK(f.slope == doctest::Approx(-0.0173).epsilon(1e-6));

    std::vector<ScalingFit> fits;
    for (int d = 1; d <= 6; ++d) {
        ScalingFit s;
        s.d = d;
        s.k_d = 0.002 * d - 0.01;
        fits.push_back(s);
    }
    const auto kd = kd_linear_fit(fits);
    CHECK(kd.q == doctest::Approx(0.002).epsilon(1e-12));
    CHECK(kd.q_prime == doctest::Approx(-0.01).epsilon(1e-12));
    fits.resize(3);
    CHECK_THROWS_AS(kd_linear_fit(fits), InvalidInput);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(dC_dalpha(1, kCritical, 0.0), InvalidInput);
    CHECK_THROWS_AS(log_divergence_scan(kCritical, 2, Side::above, {-20.0, -19.0, 12}), InvalidInput);
    CHECK_THROWS_AS(log_divergence_scan(kCritical, 2, Side::above, {-5.0, -2.0, 12}), InvalidInput);
    CHECK_THROWS_AS(log_divergence_scan(kCritical, 2, Side::above, {-9.0, -8.0, 4}), InvalidInput);
    CHECK_THROWS_AS(critical_value({0.0, 1.0, 1.0, 1.0, 1.0}, ScanAxis::alpha), InvalidInput);
}
