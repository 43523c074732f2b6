#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hamred/liouville2d.hpp"
#include "support.hpp"

using namespace hamred;

namespace {

IntegralPair free_pair() {
    IntegralPair p;
    p.H = [](const Vec& z) { return 0.5 * (z(2) * z(2) + z(3) * z(3)); };
    p.F = [](const Vec& z) { return z(3); };
    return p;
}

IntegralPair harmonic_pair() {
    IntegralPair p;
    p.H = [](const Vec& z) { return 0.5 * (z(2) * z(2) + z(3) * z(3)) + 0.5 * z(0) * z(0); };
    p.F = [](const Vec& z) { return z(3); };
    return p;
}

// Isotropic oscillator with the angular momentum as second integral.
IntegralPair central_pair() {
    IntegralPair p;
    p.H = [](const Vec& z) { return 0.5 * (z(2) * z(2) + z(3) * z(3)) + 0.5 * (z(0) * z(0) + z(1) * z(1)); };
    p.F = [](const Vec& z) { return z(0) * z(3) - z(1) * z(2); };
    return p;
}

VectorField canonical_field(const IntegralPair& pair) {
    return {4,
            [pair](const Vec& z) -> Vec {
                const Vec g = pair.grad_H(z);
                return Vec{{g(2), g(3), -g(0), -g(1)}};
            },
            "hamilton",
            {}};
}

}  // namespace

TEST_CASE("level inversion") {
    const IntegralPair fp = free_pair();
    const LevelSurface ls = invert_levels(fp, 1.0, 0.6, {1.0, 1.0});
    const double fx = std::sqrt(2.0 - 0.36);
    const Point2 p = ls.momenta(0.3, -2.0);
    CHECK(p[0] == doctest::Approx(fx).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(invert_levels(fp, 1.0, 0.6, {-1.0, 1.0}).f_x(0.0, 0.0) == doctest::Approx(-fx).epsilon(1e-12));

    const LevelSurface h = invert_levels(harmonic_pair(), 1.0, 0.6, {1.0, 1.0});
    for (double x : {-1.0, -0.4, 0.0, 0.5, 1.1})
        CHECK(h.f_x(x, 0.2) == doctest::Approx(std::sqrt(2.0 - 0.36 - x * x)).epsilon(1e-10));
    CHECK_THROWS_AS(invert_levels(harmonic_pair(), -1.0, 0.0, {1.0, 1.0}).momenta(0.0, 0.0), BranchError);
    const LevelSurface up = h.shifted(0.5, 0.0);
    CHECK(up.E() == 1.5);
    CHECK(up.f_x(0.0, 0.0) == doctest::Approx(std::sqrt(3.0 - 0.36)).epsilon(1e-10));
}

TEST_CASE("integral invariants at random points") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const IntegralPair cp = central_pair();
    const LevelSurface ls = invert_levels(cp, 3.0, 1.0, {1.0, 1.0}, {}, {1.0, 0.5});
    const LevelSurface hs = invert_levels(harmonic_pair(), 1.0, 0.6, {1.0, 1.0});
    for (int trial = 0; trial < 200; ++trial) {
        const Vec z{{u(rng), u(rng), u(rng), u(rng)}};
        CHECK(std::abs(involution_residual(cp, z)) <= 1e-8);
        CHECK(std::abs(involution_residual(harmonic_pair(), z)) <= 1e-8);
        const double x = 1.0 + 0.3 * u(rng), y = 0.5 + 0.3 * u(rng);
        const Point2 p = ls.momenta(x, y);
        const Vec on{{x, y, p[0], p[1]}};
        CHECK(std::abs(cp.H(on) - 3.0) <= 1e-12);
        CHECK(std::abs(cp.F(on) - 1.0) <= 1e-12);
        CHECK(std::abs(momentum_jacobian_det(cp, on)) > 1e-3);
        CHECK(curl_residual(ls, x, y) <= 1e-6);
        CHECK(curl_residual(hs, 0.9 * u(rng), u(rng)) <= 1e-6);
    }
}

TEST_CASE("potential by quadrature") {
    const LevelSurface ls = invert_levels(free_pair(), 1.0, 0.6, {1.0, 1.0});
    const double fx = std::sqrt(2.0 - 0.36);
    CHECK(potential_phi(ls, 0.0, 0.0) == 0.0);
    CHECK(potential_phi(ls, 0.7, -1.2) == doctest::Approx(fx * 0.7 - 0.6 * 1.2).epsilon(1e-10));
    const LevelSurface cs = invert_levels(central_pair(), 3.0, 1.0, {1.0, 1.0}, {}, {1.0, 0.5});
    const Point2 origin{1.0, 0.5};
    for (const auto& [x, y] : std::vector<Point2>{{1.2, 0.7}, {0.8, 0.3}, {1.25, 0.35}})
        CHECK(std::abs(potential_phi(cs, x, y, origin) - potential_phi_detour(cs, x, y, origin)) <= 1e-6);
}

TEST_CASE("level derivatives") {
    const LevelSurface ls = invert_levels(central_pair(), 3.0, 1.0, {1.0, 1.0}, {}, {1.0, 0.5});
    const Mat fd = level_derivatives(ls, 1.1, 0.4);
    const Mat implicit = level_derivatives_implicit(ls, 1.1, 0.4);
    CHECK(max_abs(fd - implicit) < 1e-8);
    const LevelSurface fs = invert_levels(free_pair(), 1.0, 0.6, {1.0, 1.0});
    const double fx = std::sqrt(1.64);
    const Mat hand{{1.0 / fx, 0.0}, {-0.6 / fx, 1.0}};
    CHECK(max_abs(level_derivatives_implicit(fs, 0.2, 0.3) - hand) < 1e-12);
    const Point2 d = potential_level_derivatives(fs, 0.5, 2.0);
    CHECK(d[0] == doctest::Approx(0.5 / fx).epsilon(1e-8));
    CHECK(d[1] == doctest::Approx(-0.6 * 0.5 / fx + 2.0).epsilon(1e-8));
}

TEST_CASE("free motion") {
    const IntegralPair fp = free_pair();
    const LevelSurface ls = invert_levels(fp, 1.0, 0.6, {1.0, 1.0});
    const Point2 start{0.2, -0.1};
    const Point2 b = liouville_constants(ls, start[0], start[1]);
    const Vec at0 = liouville_solve(fp, ls, b[0], b[1], 0.0, start);
    CHECK(std::abs(at0(0) - start[0]) < 1e-9);
    CHECK(std::abs(at0(1) - start[1]) < 1e-9);
    const double fx = std::sqrt(1.64);
    const Trajectory tr = liouville_trajectory(fp, ls, b[0], b[1], {0.0, 0.5, 1.0, 2.0, 3.0}, start);
    for (const auto& s : tr.samples) {
        CHECK(std::abs(s.z(0) - (start[0] + fx * s.t)) < 1e-6);
        CHECK(std::abs(s.z(1) - (start[1] + 0.6 * s.t)) < 1e-6);
    }
    CHECK(tr.max_diagnostic("H_drift") <= 1e-7);
    CHECK(tr.max_diagnostic("F_drift") <= 1e-7);
}

TEST_CASE("harmonic motion against the oracle") {
    const IntegralPair hp = harmonic_pair();
    const LevelSurface ls = invert_levels(hp, 1.0, 0.6, {1.0, 1.0});
    const Point2 start{0.0, 0.0};
    const Point2 b = liouville_constants(ls, 0.0, 0.0);
    std::vector<double> times;
    for (int i = 0; i <= 14; ++i) times.push_back(0.1 * i);
    const Trajectory tr = liouville_trajectory(hp, ls, b[0], b[1], times, start);
    const Point2 p0 = ls.momenta(0.0, 0.0);
    Tolerances tight;
    tight.quad_tol = 1e-12;
    const Trajectory rk = rk_integrate(canonical_field(hp), Vec{{0.0, 0.0, p0[0], p0[1]}}, {0.0, 1.4}, tight, 0.1);
    REQUIRE(rk.samples.size() == tr.samples.size());
    for (std::size_t i = 0; i < tr.samples.size(); ++i) CHECK(max_abs(tr.samples[i].z - rk.samples[i].z) <= 1e-5);
    CHECK(tr.max_diagnostic("H_drift") <= 1e-7);

    const double dt = 1e-3;
    const Vec a = liouville_solve(hp, ls, b[0], b[1], 0.7 - dt, {0.8, 0.4});
    const Vec c = liouville_solve(hp, ls, b[0], b[1], 0.7 + dt, {0.8, 0.4});
    const Vec mid = liouville_solve(hp, ls, b[0], b[1], 0.7, {0.8, 0.4});
    CHECK(max_abs((c - a) / (2.0 * dt) - canonical_field(hp)(mid)) < 1e-5);

    for (double t : {1.5, 1.55, 1.56}) {
        const Vec near = liouville_solve(hp, ls, b[0], b[1], t, {0.0, 0.0});
        CHECK(std::abs(near(0) - std::sqrt(1.64) * std::sin(t)) <= 1e-7);
    }
    CHECK_THROWS_AS(liouville_solve(hp, ls, b[0], b[1], 1.7, {1.2, 1.0}), CausticError);
}
