#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hamred/rigid_body.hpp"
#include "hamred/sphere_model.hpp"
#include "support.hpp"

using namespace hamred;
using namespace testing_support;

namespace {

ConstrainedSystem free_system(const Mat& m) {
    ConstrainedSystem s;
    s.n = static_cast<int>(m.rows());
    s.k = s.n;
    s.mass_matrix = [m](const Vec&) { return m; };
    s.potential = [](const Vec&) { return 0.0; };
    s.constraints.count = 0;
    s.constraints.g = [](const Vec&) { return Vec(0); };
    s.constant_mass = true;
    return s;
}

// Two-dimensional polar-like metric with a potential.
ConstrainedSystem curved_system() {
    ConstrainedSystem s;
    s.n = 2;
    s.k = 1;
    s.mass_matrix = [](const Vec& q) {
        Mat m(2, 2);
        m << 1.0 + q(1) * q(1), 0.3 * q(0), 0.3 * q(0), 2.0 + std::sin(q(0));
        return m;
    };
    s.potential = [](const Vec& q) { return 0.5 * q(0) * q(0) + std::cos(q(1)); };
    s.constraints.count = 1;
    s.constraints.g = [](const Vec& q) { return Vec::Constant(1, q(0) + q(1) * q(1) - 1.0); };
    return s;
}

}  // namespace

TEST_CASE("legendre map") {
    FullPhaseState s{Vec::Zero(3), Vec{{1.0, 2.0, 3.0}}};
    CHECK(max_abs(legendre_velocity(free_system(Mat::Identity(3, 3)), s) - s.p) == 0.0);

    Mat d = Mat::Zero(2, 2);
    d(0, 0) = 2.0;
    d(1, 1) = 4.0;
    FullPhaseState s2{Vec::Zero(2), Vec{{2.0, 4.0}}};
    CHECK(max_abs(legendre_velocity(free_system(d), s2) - Vec::Ones(2)) < 1e-15);

    const InertiaData body = inertia_from_moments(Vec{{2.0, 3.0, 4.0}});
    const ConstrainedSystem rb = rigid_body_system(body);
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        const Vec q = flatten(random_rotation(rng));
        const Vec v = random_vector(rng, 9);
        const Vec p = legendre_momentum(rb, q, v);
        // p = Rdot g row by row
        CHECK(max_abs(unflatten(p) - unflatten(v) * body.g) < 1e-13);
        CHECK(max_abs(legendre_velocity(rb, {q, p}) - v) < 1e-10);
    }
}

TEST_CASE("singular mass matrix") {
    Mat d = Mat::Identity(2, 2);
    d(1, 1) = -1.0;
    CHECK_THROWS_AS(legendre_velocity(free_system(d), {Vec::Zero(2), Vec::Ones(2)}), DefinitenessError);
}

TEST_CASE("canonical hamiltonian") {
    CHECK(canonical_hamiltonian(free_system(Mat::Identity(2, 2)), {Vec::Zero(2), Vec{{3.0, 4.0}}}) ==
          doctest::Approx(12.5));

    SphereSystem sp{2.0, 1.5, 2};
    const ConstrainedSystem s = sphere_constrained_system(sp);
    const Vec p{{0.3, -1.1, 0.4}};
    CHECK(canonical_hamiltonian(s, {Vec{{0.0, 0.0, 1.5}}, p}) ==
          doctest::Approx(p.squaredNorm() / (2.0 * sp.m)));

    const InertiaData body = inertia_from_moments(Vec{{2.0, 3.0, 4.0}});
    const ConstrainedSystem rb = rigid_body_system(body);
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 10; ++trial) {
        const Vec q = flatten(random_rotation(rng));
        const Mat pm = random_matrix(rng, 3, 3);
        const Mat ginv = body.g.inverse();
        double direct = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) direct += 0.5 * ginv(i, j) * pm(k, i) * pm(k, j);
        CHECK(canonical_hamiltonian(rb, {q, flatten(pm)}) == doctest::Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("natural force term matches the general formula") {
    const ConstrainedSystem s = curved_system();
    const auto lagrangian = [&s](const Vec& q, const Vec& v) {
        return 0.5 * v.dot(s.mass_matrix(q) * v) - s.potential(q);
    };
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const Vec q = 0.5 * random_vector(rng, 2);
        const Vec v = random_vector(rng, 2);
        CHECK(max_abs(natural_force_term(s, q, v) - general_force_term(lagrangian, q, v)) < 1e-6);
    }
}

TEST_CASE("multiplier equations on the sphere") {
    const ConstrainedSystem s = sphere_constrained_system({1.0, 2.0, 2});
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        const Vec q = 2.0 * random_unit(rng, 3);
        Vec v = random_vector(rng, 3);
        v -= v.dot(q) / q.squaredNorm() * q;
        const MultiplierStep st = multiplier_ode_rhs(s, q, v);
        CHECK(max_abs(st.qddot + v.squaredNorm() / q.squaredNorm() * q) < 1e-12);
        CHECK(st.diag.constraint_violation < 1e-12);
        CHECK(st.diag.velocity_tangency_violation < 1e-12);
    }
    const Vec q = Vec{{0.0, 0.0, 2.0}};
    const MultiplierStep rest = multiplier_ode_rhs(s, q, Vec::Zero(3));
    CHECK(max_abs(rest.qddot) == 0.0);
}

TEST_CASE("multiplier flow stays on the surface") {
    Tolerances tol;
    for (const ConstrainedSystem& s : {sphere_constrained_system({}), curved_system()}) {
        std::mt19937_64 rng(6);
        const FullPhaseState st = random_on_shell_state(s, rng, tol);
        const Vec v = legendre_velocity(s, st);
        const Trajectory tr = multiplier_flow(s, st.q, v, {0.0, 1.0}, tol, 0.1);
        CHECK(tr.labels.front() == (s.labels.empty() ? "q1" : s.labels.front()));
        CHECK(tr.max_diagnostic("constraint_residual") < 1e-6);
        CHECK(tr.max_diagnostic("tangency_residual") < 1e-6);
        CHECK(tr.max_diagnostic("energy_drift") < 1e-6);
    }
}

TEST_CASE("validation") {
    ConstrainedSystem s = curved_system();
    CHECK_NOTHROW(s.validate());
    s.k = 0;
    CHECK_THROWS_AS(s.validate(), DimensionError);
}
