#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hamred/rigid_body.hpp"
#include "hamred/sphere_model.hpp"
#include "support.hpp"

using namespace hamred;
using namespace testing_support;

namespace {

Vec sphere_point(std::mt19937_64& rng) {
    for (;;) {
        const Vec x = random_unit(rng, 3);
        if (std::abs(x(2)) > 0.3) return x;
    }
}

ScalarFunction random_smooth(std::mt19937_64& rng, int dim) {
    const Vec a = random_vector(rng, dim);
    const Vec b = random_vector(rng, dim);
    ScalarFunction f;
    f.value = [a, b](const Vec& z) { return std::sin(a.dot(z)) + 0.5 * std::pow(b.dot(z), 2); };
    return f;
}

Vec sphere_phase_point(std::mt19937_64& rng) {
    const Vec x = sphere_point(rng);
    Vec p = random_vector(rng, 3);
    p -= p.dot(x) * x;
    Vec z(6);
    z << x, p;
    return z;
}

}  // namespace

TEST_CASE("canonical bracket") {
    const PoissonStructure ps = canonical_structure(2);
    const Vec z = Vec{{0.3, -0.2, 1.0, 2.0}};
    CHECK(bracket(ps, coordinate_function(0, 4), coordinate_function(2, 4), z) == 1.0);
    CHECK(bracket(ps, coordinate_function(0, 4), coordinate_function(1, 4), z) == 0.0);
    CHECK(jacobi_residual(ps, z) <= 1e-12);
    CHECK_THROWS_AS(bracket(ps, coordinate_function(0, 3), coordinate_function(1, 4), z),
                    DimensionError);
}

TEST_CASE("intermediate brackets of the sphere") {
    const ConstraintSpec spec = sphere_constrained_system({}).constraints;
    const PoissonStructure ps = intermediate_structure(spec, 3, {2});
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 50; ++trial) {
        const Vec x = sphere_point(rng);
        Vec z(6);
        z << x, random_vector(rng, 3);
        // momenta in basis order: pi_3 first, then pi_1, pi_2
        const Mat w = ps.at(z);
        CHECK(bracket(ps, coordinate_function(2, 6), coordinate_function(4, 6), z) ==
              doctest::Approx(-x(0) / x(2)).epsilon(1e-13));
        CHECK(w(0, 4) == 1.0);
        CHECK(w(1, 5) == 1.0);
        CHECK(w(2, 5) == doctest::Approx(-x(1) / x(2)).epsilon(1e-13));
        CHECK(w(0, 5) == 0.0);
        CHECK(w(1, 4) == 0.0);
        CHECK(max_abs(w.topLeftCorner(3, 3)) == 0.0);
        CHECK(max_abs(w + w.transpose()) <= 1e-12);
    }
}

TEST_CASE("intermediate brackets of linear constraints") {
    ConstraintSpec spec;
    spec.count = 1;
    spec.g = [](const Vec& q) { return Vec::Constant(1, q(0) - 2.0 * q(1)); };
    spec.jacobian = [](const Vec&) { return Mat{{1.0, -2.0, 0.0}}; };
    spec.hessians = [](const Vec&) { return std::vector<Mat>(1, Mat::Zero(3, 3)); };
    const Vec q{{2.0, 1.0, 0.5}};
    const TangentBasis b = fundamental_solutions(spec, q);
    const Mat w = intermediate_brackets(spec, b, q, Vec{{0.4, -1.0, 3.0}});
    CHECK(max_abs(w.bottomRightCorner(3, 3)) == 0.0);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(w(b.free_columns[j], 3 + 1 + i) == (i == j ? 1.0 : 0.0));
}

TEST_CASE("dirac bracket") {
    const ConstrainedSystem sys = sphere_constrained_system({});
    const PoissonStructure ps = canonical_structure(3);
    const ConstraintSet cs = second_class_constraints(sys);
    std::mt19937_64 rng(2);
    double worst = 0.0, xx = 0.0;
    for (int point = 0; point < 20; ++point) {
        const Vec z = sphere_phase_point(rng);
        for (int f = 0; f < 10; ++f) {
            const ScalarFunction fn = random_smooth(rng, 6);
            for (const auto& t : cs.functions) worst = std::max(worst, std::abs(dirac_bracket(ps, cs, fn, t, z)));
        }
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                xx = std::max(xx, std::abs(dirac_bracket(ps, cs, coordinate_function(i, 6),
                                                          coordinate_function(j, 6), z)));
    }
    CHECK(worst <= 1e-9);
    CHECK(xx <= 1e-12);

    const ConstraintSet none;
    const Vec z = sphere_phase_point(rng);
    const ScalarFunction f = random_smooth(rng, 6), g = random_smooth(rng, 6);
    CHECK(dirac_bracket(ps, none, f, g, z) == doctest::Approx(bracket(ps, f, g, z)));

    ConstraintSet dup;
    dup.functions = {cs.functions[0], cs.functions[0]};
    CHECK_THROWS_AS(dirac_tensor(ps, dup, z), SecondClassError);
}

TEST_CASE("dirac tensor of the sphere by explicit inversion") {
    // Delta = [[0, x^2], [-x^2, 0]] for G = (x^2 - c^2)/2, Phi = (x, p)
    const ConstrainedSystem sys = sphere_constrained_system({});
    const ConstraintSet cs = second_class_constraints(sys);
    std::mt19937_64 rng(12);
    const Vec z = sphere_phase_point(rng);
    const Vec x = z.head(3), p = z.tail(3);
    const Mat w = dirac_tensor(canonical_structure(3), cs, z);
    const double r2 = x.squaredNorm();
    const Mat proj = Mat::Identity(3, 3) - x * x.transpose() / r2;
    CHECK(max_abs(w.topRightCorner(3, 3) - proj) < 1e-12);
    const Mat pp = (x * p.transpose() - p * x.transpose()) / r2;
    CHECK(max_abs(w.bottomRightCorner(3, 3) + pp) < 1e-12);
}

TEST_CASE("jacobi residuals") {
    std::mt19937_64 rng(3);
    const PoissonStructure chetaev = rigid_body_structure(BodyBracket::chetaev);
    const PoissonStructure full = rigid_body_structure(BodyBracket::full);
    const PoissonStructure sphere = sphere_structure({});
    for (int trial = 0; trial < 20; ++trial) {
        Vec z(12);
        z << flatten(random_rotation(rng)), random_vector(rng, 3);
        CHECK(jacobi_residual(chetaev, z) <= 1e-8);
        CHECK(max_abs(chetaev.at(z) - full.at(z)) < 1e-12);
        Vec y(12);
        y << flatten(random_invertible(rng)), random_vector(rng, 3);
        CHECK(jacobi_residual(full, y) <= 1e-8);
        Vec s(5);
        s << sphere_point(rng), random_vector(rng, 2);
        CHECK(jacobi_residual(sphere, s) <= 1e-8);
    }

    PoissonStructure broken = sphere;
    broken.tensor = [sphere](const Vec& z) {
        Mat w = sphere.tensor(z);
        w(0, 4) += z(1) * z(1);
        w(4, 0) += z(1) * z(1);
        return w;
    };
    const Vec s{{0.3, 0.4, std::sqrt(0.75), 1.0, -0.5}};
    CHECK(jacobi_residual(broken, s) > 1e-3);
    CHECK_THROWS_AS(broken.at(s), SymmetryError);
}

TEST_CASE("new momenta commute with the constraints") {
    const ConstrainedSystem sys = sphere_constrained_system({});
    const PoissonStructure ps = canonical_structure(3);
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        const Vec z = sphere_phase_point(rng);
        ScalarFunction g;
        g.value = [&sys](const Vec& v) { return sys.constraints.value(v.head(3))(0); };
        for (int i = 0; i < 2; ++i) {
            ScalarFunction pi;
            pi.value = [&sys, i](const Vec& v) {
                const TangentBasis b = fundamental_solutions(sys.constraints, v.head(3), {2});
                return b.g_lower.row(i).dot(v.tail(3));
            };
            CHECK(std::abs(bracket(ps, pi, g, z)) <= 1e-10);
        }
        for (int a = 0; a < 3; ++a) CHECK(std::abs(bracket(ps, coordinate_function(a, 6), g, z)) == 0.0);
    }
}

TEST_CASE("casimir drift") {
    Tolerances tol;
    const SphereSystem sp{};
    const PoissonStructure ps = sphere_structure(sp);
    ScalarFunction h;
    h.value = [sp](const Vec& z) { return sphere_reduced_hamiltonian(sp, z.head(3), z.tail(2)); };
    const Vec z0{{0.2, 0.1, std::sqrt(0.95), 0.7, -0.3}};
    CHECK(casimir_drift(ps, sphere_casimir(sp), h, z0, {0.0, 1.0}, tol) <= 1e-8);
    CHECK(casimir_drift(ps, sphere_casimir(sp), sphere_casimir(sp), z0, {0.0, 1.0}, tol) == 0.0);

    const InertiaData body = inertia_from_moments(Vec{{1.0, 2.0, 3.0}});
    const PoissonStructure full = rigid_body_structure(BodyBracket::full);
    Vec y0(12);
    y0 << flatten(Mat::Identity(3, 3)), Vec{{1.0, 2.0, 3.0}};
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            ScalarFunction c;
            c.value = [i, j](const Vec& z) {
                const Mat r = unflatten(z.head(9));
                return (r.transpose() * r)(i, j);
            };
            CHECK(casimir_drift(full, c, body_hamiltonian_function(body), y0, {0.0, 1.0}, tol) <= 1e-8);
        }
}
