#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hamred/lie_series.hpp"
#include "hamred/rigid_body.hpp"
#include "support.hpp"

using namespace hamred;
using namespace testing_support;

namespace {

double eps3(int i, int j, int k) {
    return static_cast<double>((i - j) * (j - k) * (k - i)) / 2.0;
}

Vec cross(const Vec& a, const Vec& b) {
    return Eigen::Vector3d(a).cross(Eigen::Vector3d(b));
}

Mat axis_rotation(int axis, double angle) {
    return Eigen::AngleAxisd(angle, Eigen::Vector3d::Unit(axis)).toRotationMatrix();
}

Tolerances tight() {
    Tolerances t;
    t.quad_tol = 1e-13;
    return t;
}

}  // namespace

TEST_CASE("inertia from particles") {
    std::vector<Particle> six;
    for (int a = 0; a < 3; ++a)
        for (double s : {1.0, -1.0}) six.push_back({1.0, s * Vec::Unit(3, a)});
    const InertiaData star = inertia_from_particles(six);
    CHECK(max_abs(star.g - 2.0 * Mat::Identity(3, 3)) < 1e-14);
    CHECK(max_abs(star.I - 4.0 * Mat::Identity(3, 3)) < 1e-14);

    std::vector<Particle> flat = {{1.0, Vec{{1.0, 0.0, 0.0}}}, {2.0, Vec{{0.0, 1.0, 0.0}}},
                                  {1.5, Vec{{1.0, 1.0, 0.0}}}};
    CHECK_THROWS_AS(inertia_from_particles(flat), PlanarityError);

    std::mt19937_64 rng(1);
    std::vector<Particle> cloud;
    Mat g = Mat::Zero(3, 3);
    for (int i = 0; i < 7; ++i) {
        const Particle p{0.5 + i * 0.1, random_vector(rng, 3)};
        g += p.mass * p.position * p.position.transpose();
        cloud.push_back(p);
    }
    const InertiaData d = inertia_from_particles(cloud);
    CHECK(d.diagonal());
    CHECK(max_abs(d.frame * d.g * d.frame.transpose() - g) < 1e-12);
    CHECK(max_abs(d.frame.transpose() * d.frame - Mat::Identity(3, 3)) < 1e-12);
    const Vec gi = d.g_diag(), I = d.moments();
    for (int i = 0; i < 3; ++i) CHECK(2.0 * gi(i) == doctest::Approx(I((i + 1) % 3) + I((i + 2) % 3) - I(i)));
    CHECK(is_positive_definite(d.I));
}

TEST_CASE("inertia from a mass matrix or moments") {
    CHECK(max_abs(inertia_from_mass_matrix(Mat::Identity(3, 3)).I - 2.0 * Mat::Identity(3, 3)) == 0.0);
    Mat bad = Mat::Identity(3, 3);
    bad(2, 2) = 0.0;
    CHECK_THROWS_AS(inertia_from_mass_matrix(bad), PlanarityError);

    const InertiaData m = inertia_from_moments(Vec{{2.0, 3.0, 4.0}});
    CHECK(max_abs(m.g_diag() - Vec{{2.5, 1.5, 0.5}}) < 1e-15);
    CHECK(max_abs(inertia_tensor(m.g) - m.I) < 1e-15);
    CHECK(inertia_from_moments(Vec{{1.0, 2.0, 3.0}}).g_diag()(2) == 0.0);
    CHECK_THROWS_AS(inertia_from_moments(Vec{{1.0, 1.0, 3.0}}), PlanarityError);
    CHECK_THROWS_AS(rigid_body_system(inertia_from_moments(Vec{{2.0, 2.0, 4.0}})), PlanarityError);
}

TEST_CASE("momentum split") {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        const Mat r = random_invertible(rng);
        const Vec a = random_vector(rng, 3);
        const MomentumSplit anti = momentum_split(r, r * hat(a));
        CHECK(max_abs(anti.S) < 1e-12);
        CHECK(max_abs(momentum_reconstruct(r, anti.S, anti.M) - r * hat(a)) < 1e-12);

        const Mat d = random_spd(rng, 3);
        CHECK(max_abs(momentum_split(r, r * d).M) < 1e-12);

        const Mat p = random_matrix(rng, 3, 3);
        const MomentumSplit sp = momentum_split(r, p);
        const Mat A = r.inverse() * p;
        for (int k = 0; k < 3; ++k) {
            double mk = 0.0;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) mk -= eps3(k, i, j) * A(i, j);
            CHECK(sp.M(k) == doctest::Approx(mk).epsilon(1e-12));
        }
        CHECK(max_abs(sp.S - sp.S.transpose()) == 0.0);
        CHECK(max_abs(momentum_reconstruct(r, sp.S, sp.M) - p) < 1e-12);
    }
}

TEST_CASE("symmetric part from the tertiary constraints") {
    CHECK(resolve_S(inertia_from_moments(Vec{{2.0, 2.0, 3.0}}), Vec{{0.3, 0.7, 1.1}})(0, 1) == 0.0);
    const InertiaData g123 = inertia_from_mass_matrix(Vec{{1.0, 2.0, 3.0}}.asDiagonal());
    const Mat s = resolve_S(g123, Vec{{1.0, 0.0, 0.0}});
    CHECK(s(1, 2) == doctest::Approx(-0.2));
    CHECK(s(2, 1) == doctest::Approx(-0.2));
    CHECK(max_abs(s.diagonal()) == 0.0);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.2, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        const InertiaData in = inertia_from_mass_matrix(Vec{{u(rng), u(rng), u(rng)}}.asDiagonal());
        const Vec M = random_vector(rng, 3);
        const Mat got = resolve_S(in, M);
        const Vec I = in.moments();
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                if (i == j) continue;
                const int k = 3 - i - j;
                CHECK(got(i, j) == doctest::Approx((I(j) - I(i)) / I(k) * eps3(i, j, k) * M(k)).epsilon(1e-12));
            }
    }
    const Mat q = random_rotation(rng);
    CHECK_THROWS_AS(resolve_S(inertia_from_mass_matrix(q * Vec{{1.0, 2.0, 3.0}}.asDiagonal() * q.transpose()),
                              Vec::Ones(3)),
                    ReductionError);
}

TEST_CASE("structures over (R, M)") {
    const PoissonStructure full = rigid_body_structure(BodyBracket::full);
    const PoissonStructure chet = rigid_body_structure(BodyBracket::chetaev);
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        Vec z(12);
        z << flatten(random_rotation(rng)), random_vector(rng, 3);
        CHECK(max_abs(full.at(z) - chet.at(z)) < 1e-12);
        Vec y(12);
        y << flatten(random_invertible(rng)), random_vector(rng, 3);
        const Mat w = full.at(y);
        CHECK(max_abs(w.topLeftCorner(9, 9)) == 0.0);
        const Mat r = unflatten(y.head(9));
        const Vec mm = (r.transpose() * r).inverse() * y.tail(3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double expect = 0.0;
                for (int k = 0; k < 3; ++k) expect -= eps3(i, j, k) * mm(k);
                CHECK(w(9 + i, 9 + j) == doctest::Approx(expect).epsilon(1e-10));
            }
        ScalarFunction m2;
        m2.value = [](const Vec& v) { return v.tail(3).squaredNorm(); };
        m2.gradient = [](const Vec& v) {
            Vec g = Vec::Zero(12);
            g.tail(3) = 2.0 * v.tail(3);
            return g;
        };
        for (int k = 0; k < 3; ++k) CHECK(std::abs(bracket(chet, m2, coordinate_function(9 + k, 12), z)) <= 1e-12);
    }
}

TEST_CASE("euler-poisson equations") {
    const InertiaData in = inertia_from_moments(Vec{{1.0, 2.0, 3.0}});
    const BodyState axis{Mat::Identity(3, 3), Vec{{0.0, 2.0, 0.0}}};
    CHECK(max_abs(euler_poisson_rhs(in, axis).Mdot) == 0.0);
    const InertiaData top = inertia_from_moments(Vec{{2.0, 2.0, 4.0}});
    CHECK(euler_poisson_rhs(top, {Mat::Identity(3, 3), Vec{{0.3, -0.5, 1.2}}}).Mdot(2) == 0.0);

    std::mt19937_64 rng(5);
    const BodyState s{random_rotation(rng), Vec{{1.0, 1.0, 1.0}}};
    const BodyRates rates = euler_poisson_rhs(in, s);
    const Vec omega = in.I.inverse() * s.M;
    CHECK(max_abs(rates.Mdot - cross(s.M, omega)) < 1e-12);
    Mat rdot = Mat::Zero(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int m = 0; m < 3; ++m) rdot(i, j) -= eps3(j, k, m) * omega(k) * s.R(i, m);
    CHECK(max_abs(rates.Rdot - rdot) < 1e-12);
    for (BodyBracket kind : {BodyBracket::full, BodyBracket::chetaev}) {
        const Vec flow = hamiltonian_field(rigid_body_structure(kind), body_hamiltonian_function(in))(s.packed());
        CHECK(max_abs(flow.tail(3) - rates.Mdot) < 1e-12);
        CHECK(max_abs(unflatten(flow.head(9)) - rates.Rdot) < 1e-10);
    }
    const VectorField f = euler_poisson_field(in);
    const auto terms = f.taylor(s.packed(), 6);
    const LieSeriesSolution fd = lie_coefficients(VectorField{12, f.eval, "fd", {}}, s.packed(), 3);
    for (int n = 0; n <= 3; ++n) CHECK(max_abs(terms[n] - fd.terms[n]) < 1e-6);
}

TEST_CASE("hamiltonian") {
    CHECK(hamiltonian_body(inertia_from_moments(Vec{{2.0, 2.0, 2.0}}), {Mat::Identity(3, 3), Vec{{2.0, 0.0, 0.0}}}) ==
          doctest::Approx(1.0));
    std::mt19937_64 rng(6);
    const InertiaData in = inertia_from_mass_matrix(Vec{{0.7, 1.3, 2.1}}.asDiagonal());
    for (int trial = 0; trial < 20; ++trial) {
        const Vec M = random_vector(rng, 3);
        const double h = hamiltonian_body(in, {Mat::Identity(3, 3), M});
        CHECK(hamiltonian_body_split(in, resolve_S(in, M), M) == doctest::Approx(h).epsilon(1e-10));
        const Mat q = random_rotation(rng);
        const InertiaData rotated = inertia_from_mass_matrix(q * in.g * q.transpose());
        CHECK(hamiltonian_body(rotated, {Mat::Identity(3, 3), q * M}) == doctest::Approx(h).epsilon(1e-10));
        const ScalarFunction hf = body_hamiltonian_function(in);
        Vec z(12);
        z << flatten(random_rotation(rng)), M;
        CHECK(max_abs(hf.grad(z) - fd_gradient(hf.value, z)) < 1e-9);
    }
}

TEST_CASE("simulations") {
    const Tolerances tol = tight();
    SUBCASE("symmetric top precession") {
        const InertiaData top = inertia_from_moments(Vec{{2.0, 2.0, 4.0}});
        const Trajectory tr = simulate_body(top, Vec{{1.0, 0.0, 1.0}}, {0.0, 2.0 * M_PI}, {}, tol, 0.1);
        for (const auto& s : tr.samples) {
            const Vec omega = top.I.inverse() * s.z.tail(3);
            CHECK(std::abs(omega(2) - 1.0) <= 1e-10);
            CHECK(std::abs(omega(0) - std::cos(s.t)) <= 1e-8);
            CHECK(std::abs(omega(1) - std::sin(s.t)) <= 1e-8);
        }
    }
    SUBCASE("rotation about a principal axis") {
        const InertiaData in = inertia_from_moments(Vec{{2.0, 3.0, 4.0}});
        for (int axis = 0; axis < 3; ++axis) {
            const Vec w = 0.7 * Vec::Unit(3, axis);
            const Trajectory tr = simulate_body(in, w, {0.0, 1.0}, {}, tol, 0.25);
            for (const auto& s : tr.samples)
                CHECK(max_abs(unflatten(s.z.head(9)) - axis_rotation(axis, 0.7 * s.t)) < 1e-10);
        }
    }
    SUBCASE("conservation and series agreement") {
        const InertiaData in = inertia_from_moments(Vec{{1.0, 2.0, 3.0}});
        const Trajectory rk = simulate_body(in, Vec::Ones(3), {0.0, 1.0}, {}, tol, 0.05);
        CHECK(rk.max_diagnostic("orthogonality") <= 1e-8);
        CHECK(rk.max_diagnostic("casimir_drift") <= 1e-9);
        CHECK(rk.max_diagnostic("energy_drift") <= 1e-9);
        BodyMethod lie;
        lie.kind = BodyMethod::Kind::lie_series;
        const Trajectory ls = simulate_body(in, Vec::Ones(3), {0.0, 0.5}, lie, tol, 0.05);
        for (std::size_t i = 0; i < ls.samples.size(); ++i) CHECK(max_abs(ls.samples[i].z - rk.samples[i].z) <= 1e-8);
    }
    SUBCASE("both structures give the same flow") {
        const InertiaData in = inertia_from_moments(Vec{{1.5, 2.0, 3.0}});
        const ScalarFunction h = body_hamiltonian_function(in);
        std::mt19937_64 rng(7);
        const Vec z0 = BodyState{random_rotation(rng), random_vector(rng, 3)}.packed();
        const Vec a = rk_advance(hamiltonian_field(rigid_body_structure(BodyBracket::full), h), z0, {0.0, 1.0}, tol);
        const Vec b = rk_advance(hamiltonian_field(rigid_body_structure(BodyBracket::chetaev), h), z0, {0.0, 1.0}, tol);
        CHECK(max_abs(a - b) <= 1e-8);
    }
}

TEST_CASE("nine-coordinate system") {
    const Tolerances tol;
    const InertiaData in = inertia_from_moments(Vec{{2.0, 3.0, 4.0}});
    const ConstrainedSystem sys = rigid_body_system(in);
    std::mt19937_64 rng(8);
    SUBCASE("analytic derivatives") {
        const Vec q = flatten(random_invertible(rng));
        CHECK(max_abs(sys.constraints.jac(q) - fd_jacobian(sys.constraints.g, q, tol, FdScheme::central4)) < 1e-9);
        const auto hs = sys.constraints.hess(q);
        for (int a = 0; a < 6; ++a) {
            const Mat fd = fd_jacobian([&](const Vec& x) -> Vec { return sys.constraints.jac(x).row(a).transpose(); },
                                       q, tol, FdScheme::central4);
            CHECK(max_abs(hs[a] - fd) < 1e-9);
        }
    }
    SUBCASE("generic reduction reproduces the euler-poisson field") {
        const Vec q0 = flatten(Mat::Identity(3, 3));
        const ReducedSystem rs = reduce_intermediate(sys, choose_chart(sys, Route::intermediate, q0), tol);
        for (int trial = 0; trial < 5; ++trial) {
            const FullPhaseState s = random_on_shell_state(sys, rng, tol);
            ReducedSystem local = rs.rebuild(choose_chart(sys, Route::intermediate, s.q));
            const BodyRates got = reduced_body_rates(local, s);
            const BodyRates expect = euler_poisson_rhs(in, body_state(s));
            CHECK(max_abs(got.Rdot - expect.Rdot) <= 1e-8);
            CHECK(max_abs(got.Mdot - expect.Mdot) <= 1e-8);
        }
    }
    SUBCASE("multiplier equations agree with euler-poisson") {
        const Vec omega{{0.4, -0.8, 1.1}};
        const Vec q0 = flatten(Mat::Identity(3, 3));
        const Vec v0 = flatten(hat(omega));
        const Trajectory mult = multiplier_flow(sys, q0, v0, {0.0, 1.0}, tight(), 0.25);
        const Trajectory ep = simulate_body(in, omega, {0.0, 1.0}, {}, tight(), 0.25);
        for (std::size_t i = 0; i < mult.samples.size(); ++i)
            CHECK(max_abs(mult.samples[i].z.head(9) - ep.samples[i].z.head(9)) < 1e-7);
    }
}
