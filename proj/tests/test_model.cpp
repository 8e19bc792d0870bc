#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lrk/model.hpp"

using namespace lrk;
using std::numbers::pi;

namespace {

// Direct lattice sums, independent of the resummed closed forms.
double lattice_eps1(double k, const ModelParams& p, int terms) {
    double s = p.mu;
    for (int d = 1; d <= terms; ++d) s += 2.0 * p.t * std::exp(-p.alpha * d + p.alpha) * std::cos(k * d);
    return s;
}

double lattice_eps2(double k, const ModelParams& p, int terms) {
    double s = 0.0;
    for (int d = 1; d <= terms; ++d) s += 2.0 * p.delta * std::exp(-p.beta * d + p.beta) * std::sin(k * d);
    return s;
}

}  // namespace

TEST_CASE("epsilon1 at k = pi/2 collapses to mu + t e^a (sinh a - cosh a) / cosh a") {
    for (double a : {0.1, 0.511, 2.0}) {
        const ModelParams p{0.7, 1.3, 1.0, a, 1.0};
        const double expect = p.mu + p.t * std::exp(a) * (std::sinh(a) - std::cosh(a)) / std::cosh(a);
        CHECK(epsilon1(pi / 2, p) == doctest::Approx(expect).epsilon(1e-14));
    }
}

TEST_CASE("epsilon1 band edges at alpha = 0.511") {
    const ModelParams p{0.0, 1.0, 1.3, 0.511, 0.511};
    // Three significant figures.
    CHECK(std::round(epsilon1(0.0, p) * 100.0) / 100.0 == doctest::Approx(5.00));
    CHECK(std::round(epsilon1(pi, p) * 100.0) / 100.0 == doctest::Approx(-1.25));
}

TEST_CASE("epsilon2 vanishes at 0 and pi and matches the lattice sum at pi/2") {
    const ModelParams p{-23.23722, 1.0, 1.3, 0.2, 0.027};
    CHECK(epsilon2(0.0, p) == 0.0);
    CHECK(std::abs(epsilon2(pi, p)) < 1e-13);
    const double closed = 1.3 * std::exp(0.027) / std::cosh(0.027);
    CHECK(epsilon2(pi / 2, p) == doctest::Approx(closed).epsilon(1e-14));
    CHECK(lattice_eps2(pi / 2, p, 4000) == doctest::Approx(closed).epsilon(1e-12));
}

TEST_CASE("closed forms agree with truncated lattice sums") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        const ModelParams p{-5 + 10 * u(rng), 0.5 + u(rng), -2 + 4 * u(rng), 0.2 + 2 * u(rng), 0.2 + 2 * u(rng)};
        const double k = -pi + 2 * pi * u(rng);
        CHECK(epsilon1(k, p) == doctest::Approx(lattice_eps1(k, p, 400)).epsilon(1e-11));
        CHECK(epsilon2(k, p) == doctest::Approx(lattice_eps2(k, p, 400)).epsilon(1e-11));
    }
}

TEST_CASE("band_energy packs a Pythagorean triple") {
    // eps1(pi/2) = mu - t / cosh a and eps2(pi/2) = Delta e^b / cosh b.
    const double a = 0.8, b = 0.4;
    const ModelParams p{3.0 + 1.0 / std::cosh(a), 1.0, 4.0 * std::cosh(b) / std::exp(b), a, b};
    const auto s = band_energy(pi / 2, p);
    CHECK(s.eps1 == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(s.eps2 == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(s.energy == doctest::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("band energy at the rounded alpha = 0.511 boundaries") {
    const double astar = std::log(5.0 / 3.0);
    SUBCASE("quoted alpha = 0.511 is within rounding of the boundary") {
        const ModelParams p{-5.0, 1.0, 1.3, 0.511, 0.511};
        CHECK(band_energy(0.0, p).energy < 2e-3);
    }
    SUBCASE("exact alpha*") {
        const ModelParams p{-5.0, 1.0, 1.3, astar, astar};
        CHECK(band_energy(0.0, p).energy < 1e-12);
        const ModelParams q{1.25, 1.0, 1.3, astar, astar};
        CHECK(band_energy(pi, q).energy < 1e-12);
    }
    SUBCASE("mu = 0 is gapped") {
        const ModelParams p{0.0, 1.0, 1.3, 0.511, 0.511};
        CHECK(global_gap(p).gap > 0.1);
    }
}

TEST_CASE("energy squared equals eps1^2 + eps2^2") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const ModelParams p{-10 + 20 * u(rng), 1.0, -2 + 4 * u(rng), 0.05 + 3 * u(rng), 0.05 + 3 * u(rng)};
        const auto s = band_energy(-pi + 2 * pi * u(rng), p);
        CHECK(s.energy * s.energy == doctest::Approx(s.eps1 * s.eps1 + s.eps2 * s.eps2).epsilon(1e-14));
    }
}

TEST_CASE("parity over 1000 random points") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const ModelParams p{-30 + 40 * u(rng), 0.2 + 2 * u(rng), -2 + 4 * u(rng), 0.01 + 5 * u(rng), 0.01 + 5 * u(rng)};
        const double k = pi * u(rng);
        CHECK(std::abs(epsilon1(k, p) - epsilon1(-k, p)) <= 1e-12);
        CHECK(std::abs(epsilon2(k, p) + epsilon2(-k, p)) <= 1e-12);
    }
}

TEST_CASE("global gap at the boundaries and inside the gapped region") {
    const double astar = std::log(5.0 / 3.0);
    CHECK(global_gap({-5.0, 1.0, 1.3, astar, astar}).gap < 1e-6);
    CHECK(global_gap({1.25, 1.0, 1.3, astar, astar}).closed);

    // Brute-force dense grid for mu = 0, Delta = -1, alpha = beta = 0.015.
    const ModelParams p{0.0, 1.0, -1.0, 0.015, 0.015};
    double brute = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 200000; ++i) brute = std::min(brute, 2.0 * band_energy(pi * i / 200000.0, p).energy);
    const auto g = global_gap(p);
    CHECK(g.gap > 0.0);
    CHECK(g.gap <= brute + 1e-12);
    CHECK(g.gap == doctest::Approx(brute).epsilon(1e-6));
}

TEST_CASE("interior gap closing is flagged") {
    // Delta = 0: eps1 crosses zero at an interior momentum.
    const auto g = global_gap({0.0, 1.0, 0.0, 1.0, 1.0});
    CHECK(g.closed);
    CHECK(g.interior_closing);
    CHECK(g.k_min > 0.1);
    CHECK(g.k_min < pi - 0.1);
    CHECK_FALSE(global_gap({-5.0, 1.0, 1.3, std::log(5.0 / 3.0), 1.0}).interior_closing);
}

TEST_CASE("phase boundary values") {
    const auto near_ising = phase_boundary({-23.23722, 1.0, 1.3, 0.2, 0.027});
    REQUIRE(near_ising.size() == 1);
    CHECK(near_ising[0].alpha_star == doctest::Approx(0.0900).epsilon(1e-3 / 0.09));
    CHECK(near_ising[0].branch == BoundaryBranch::plus);
    CHECK(near_ising[0].closing_momentum == 0.0);

    const auto b5 = phase_boundary({-5.0, 1.0, 1.0, 1.0, 1.0});
    REQUIRE(b5.size() == 1);
    CHECK(b5[0].alpha_star == doctest::Approx(std::log(5.0 / 3.0)).epsilon(1e-14));

    const auto b125 = phase_boundary({1.25, 1.0, 1.0, 1.0, 1.0});
    REQUIRE(b125.size() == 1);
    CHECK(b125[0].branch == BoundaryBranch::minus);
    CHECK(b125[0].closing_momentum == doctest::Approx(pi));

    CHECK(phase_boundary({0.0, 1.0, 1.0, 1.0, 1.0}).empty());
    CHECK(phase_boundary({-1.0, 1.0, 1.0, 1.0, 1.0}).empty());
    CHECK_THROWS_AS(phase_boundary({-5.0, -1.0, 1.0, 1.0, 1.0}), InvalidInput);
}

TEST_CASE("large alpha sends the boundaries to mu = -2t and +2t") {
    const auto mus = critical_mu({0.0, 1.0, 1.0, 30.0, 30.0});
    REQUIRE(mus.size() == 2);
    CHECK(mus[0].mu_star == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(mus[1].mu_star == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("gap closes at alpha* and reopens at alpha* +- 0.05 for random mu") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        const double mu = i % 2 == 0 ? -20.0 + 17.5 * u(rng) : 1.15 + 0.8 * u(rng);
        ModelParams p{mu, 1.0, 1.0, 1.0, 1.0};
        const auto b = phase_boundary(p);
        REQUIRE(b.size() == 1);
        p.alpha = b[0].alpha_star;
        CHECK(global_gap(p).gap < 1e-6);
        for (double off : {-0.05, 0.05}) {
            ModelParams q = p;
            q.alpha = b[0].alpha_star + off;
            CHECK(global_gap(q).gap > 1e-3);
        }
    }
}

TEST_CASE("phase boundary ignores beta and Delta") {
    const auto ref = phase_boundary({-7.0, 1.0, 1.0, 1.0, 1.0});
    for (double delta : {-2.0, 0.0, 0.3, 5.0}) {
        for (double beta : {0.01, 0.5, 9.0}) {
            const auto b = phase_boundary({-7.0, 1.0, delta, 1.0, beta});
            REQUIRE(b.size() == ref.size());
            CHECK(b[0].alpha_star == ref[0].alpha_star);
        }
    }
}

TEST_CASE("short-range limit reproduces the nearest-neighbour dispersion") {
    const ModelParams p{0.4, 1.0, 1.3, 10.0, 10.0};
    const double scale = std::abs(p.mu) + 2 * p.t + 2 * std::abs(p.delta);
    for (int i = 0; i <= 64; ++i) {
        const double k = -pi + 2 * pi * i / 64.0;
        CHECK(std::abs(epsilon1(k, p) - (p.mu + 2 * p.t * std::cos(k))) <= 1e-3 * scale);
        CHECK(std::abs(epsilon2(k, p) - 2 * p.delta * std::sin(k)) <= 1e-3 * scale);
    }
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(ModelParams({0.0, 1.0, 1.0, 0.0, 1.0}).validate(), InvalidInput);
    CHECK_THROWS_AS(ModelParams({0.0, 1.0, 1.0, 1.0, -0.1}).validate(), InvalidInput);
    CHECK_THROWS_AS(ModelParams({std::nan(""), 1.0, 1.0, 1.0, 1.0}).validate(), InvalidInput);
    CHECK_THROWS_AS(global_gap({0.0, 1.0, 1.0, -1.0, 1.0}), InvalidInput);
    CHECK_THROWS_AS(global_gap({0.0, 1.0, 1.0, 1.0, 1.0}, 32), InvalidInput);
    CHECK(ModelParams{1.0, 1.0, 1.0, 0.3, 0.9}.with_locked_decay().beta == 0.3);
}
