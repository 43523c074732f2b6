#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hamred/rigid_body.hpp"
#include "hamred/sphere_model.hpp"
#include "support.hpp"

using namespace hamred;
using namespace testing_support;

namespace {

ConstraintSpec sphere_spec() { return sphere_constrained_system({}).constraints; }

ConstraintSpec hyperplane_spec() {
    ConstraintSpec s;
    s.count = 1;
    s.g = [](const Vec& q) { return Vec::Constant(1, q(0)); };
    return s;
}

void check_basis_invariants(const TangentBasis& b) {
    CHECK(max_abs(b.jacobian * b.g_lower.transpose()) < 1e-10);
    const int n = static_cast<int>(b.g_full.rows());
    CHECK(max_abs(b.g_full * b.g_full_inv - Mat::Identity(n, n)) < 1e-9);
    for (int i = 0; i < static_cast<int>(b.free_columns.size()); ++i)
        for (int j = 0; j < static_cast<int>(b.free_columns.size()); ++j)
            CHECK(b.g_lower(i, b.free_columns[j]) == (i == j ? 1.0 : 0.0));
}

}  // namespace

TEST_CASE("fundamental solutions of the sphere") {
    const ConstraintSpec spec = sphere_spec();
    const TangentBasis pole = fundamental_solutions(spec, Vec{{0.0, 0.0, 1.0}});
    CHECK(pole.pivot_columns == std::vector<int>{2});
    CHECK(max_abs(pole.g_lower - Mat::Identity(2, 3)) == 0.0);

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        Vec x = random_unit(rng, 3);
        if (std::abs(x(2)) < 0.2) continue;
        const TangentBasis b = fundamental_solutions(spec, x, {2});
        Mat expect(2, 3);
        expect << 1, 0, -x(0) / x(2), 0, 1, -x(1) / x(2);
        CHECK(max_abs(b.g_lower - expect) < 1e-14);
        check_basis_invariants(b);
    }
}

TEST_CASE("fundamental solutions of a hyperplane") {
    Vec q(3);
    q << 0.0, 2.0, -1.0;
    const TangentBasis b = fundamental_solutions(hyperplane_spec(), q);
    CHECK(b.pivot_columns == std::vector<int>{0});
    Mat expect = Mat::Zero(2, 3);
    expect(0, 1) = 1.0;
    expect(1, 2) = 1.0;
    CHECK(max_abs(b.g_lower - expect) == 0.0);
}

TEST_CASE("rank deficiency is a chart error") {
    CHECK_THROWS_AS(fundamental_solutions(sphere_spec(), Vec::Zero(3)), ChartError);
    CHECK_THROWS_AS(fundamental_solutions(sphere_spec(), Vec{{1.0, 0.0, 0.0}}, {2}), ChartError);
}

TEST_CASE("basis invariants on the rigid body surface") {
    const ConstrainedSystem sys = rigid_body_system(inertia_from_moments(Vec{{2.0, 3.0, 4.0}}));
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 100; ++trial) {
        const Vec q = flatten(random_rotation(rng));
        const TangentBasis b = fundamental_solutions(sys.constraints, q);
        CHECK(b.pivot_columns.size() == 6);
        check_basis_invariants(b);
    }
}

TEST_CASE("structure functions") {
    Tolerances tol;
    SUBCASE("linear constraints commute") {
        Vec q(3);
        q << 0.0, 0.3, 0.7;
        const auto c = structure_functions(frozen_basis(hyperplane_spec(), {0}), q, tol);
        CHECK(c.max_abs() < 1e-12);
    }
    SUBCASE("sphere fields by hand") {
        std::mt19937_64 rng(2);
        for (int trial = 0; trial < 50; ++trial) {
            Vec x = random_unit(rng, 3);
            if (std::abs(x(2)) < 0.3) continue;
            const ConstraintSpec spec = sphere_spec();
            const auto c = structure_functions(frozen_basis(spec, {2}), x, tol);
            // [x.d, G_1] = -G_1, [x.d, G_2] = -G_2, [G_1, G_2] = 0
            const Vec g1{{1.0, 0.0, -x(0) / x(2)}};
            const Vec g2{{0.0, 1.0, -x(1) / x(2)}};
            for (int d = 0; d < 3; ++d) {
                CHECK(c(0, 1, d) == doctest::Approx(-g1(d)).epsilon(1e-7));
                CHECK(c(0, 2, d) == doctest::Approx(-g2(d)).epsilon(1e-7));
                CHECK(std::abs(c(1, 2, d)) < 1e-8);
                CHECK(c(1, 0, d) == -c(0, 1, d));
            }
            const TangentBasis b = fundamental_solutions(spec, x, {2});
            const auto exact = structure_functions_exact(spec, b, x);
            for (int a = 0; a < 3; ++a)
                for (int bb = 0; bb < 3; ++bb)
                    for (int d = 0; d < 3; ++d) CHECK(std::abs(exact(a, bb, d) - c(a, bb, d)) < 1e-7);
        }
    }
    SUBCASE("free components of tangent brackets vanish") {
        const ConstrainedSystem sys = rigid_body_system(inertia_from_moments(Vec{{2.0, 3.0, 4.0}}));
        std::mt19937_64 rng(4);
        for (int trial = 0; trial < 10; ++trial) {
            const Vec q = flatten(random_rotation(rng));
            const TangentBasis b = fundamental_solutions(sys.constraints, q);
            const auto c = structure_functions(frozen_basis(sys.constraints, b.pivot_columns), q, tol);
            const auto exact = structure_functions_exact(sys.constraints, b, q);
            double worst = 0.0, diff = 0.0;
            for (int i = 6; i < 9; ++i)
                for (int j = 6; j < 9; ++j) {
                    for (int k : b.free_columns) worst = std::max(worst, std::abs(c(i, j, k)));
                    for (int d = 0; d < 9; ++d) diff = std::max(diff, std::abs(c(i, j, d) - exact(i, j, d)));
                }
            CHECK(worst < 1e-8);
            CHECK(diff < 1e-6);
        }
    }
    SUBCASE("chart change inside the stencil") {
        const ConstraintSpec spec = sphere_spec();
        const Vec x = Vec{{1.0, 0.0, 1.0}} / std::sqrt(2.0);
        const BasisField adaptive = [spec](const Vec& q) { return fundamental_solutions(spec, q); };
        CHECK_THROWS_AS(structure_functions(adaptive, x, tol), ChartError);
    }
}

TEST_CASE("frozen chart is continuous") {
    const ConstraintSpec spec = sphere_spec();
    std::mt19937_64 rng(8);
    const Vec x = Vec{{0.3, -0.4, 0.866}};
    const Vec dir = random_unit(rng, 3);
    const TangentBasis b0 = fundamental_solutions(spec, x, {2});
    for (double eps : {1e-2, 1e-3, 1e-4}) {
        const TangentBasis b1 = fundamental_solutions(spec, x + eps * dir, {2});
        CHECK(max_abs(b1.g_full - b0.g_full) < 5.0 * eps);
    }
}

TEST_CASE("projection to the surface") {
    Tolerances tol;
    const Vec x = Vec{{0.5, 1.2, -0.7}};
    const Vec p = project_to_surface(sphere_spec(), x, tol);
    CHECK(std::abs(p.norm() - 1.0) < 1e-12);
    CHECK(max_abs(p / p.norm() - x / x.norm()) < 1e-10);
}
