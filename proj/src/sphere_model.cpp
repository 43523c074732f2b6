#include "hamred/sphere_model.hpp"

#include <cmath>

namespace hamred {

namespace {

void check_chart(const Vec& x) {
    if (std::abs(x(2)) <= 1e-12 * (1.0 + x.norm()))
        throw ChartError("sphere chart x3 != 0 is invalid at x3 = " + std::to_string(x(2)));
}

// Hamilton equations over (x_1, x_2, x_3, pi_1, pi_2) in the x_3 chart.
template <typename T>
std::vector<T> sphere_rates(const std::vector<T>& z, double m) {
    const T& x1 = z[0];
    const T& x2 = z[1];
    const T& x3 = z[2];
    const T& p1 = z[3];
    const T& p2 = z[4];
    const T k = (x1 * p1 + x2 * p2) / (x1 * x1 + x2 * x2 + x3 * x3);
    const T v1 = (p1 - k * x1) / m;
    const T v2 = (p2 - k * x2) / m;
    const T h1 = (k * k * x1 - k * p1) / m;
    const T h2 = (k * k * x2 - k * p2) / m;
    const T h3 = k * k * x3 / m;
    const T a1 = x1 / x3;
    const T a2 = x2 / x3;
    return {v1, v2, -(a1 * v1 + a2 * v2), a1 * h3 - h1, a2 * h3 - h2};
}

}  // namespace

void SphereSystem::validate() const {
    if (!(m > 0.0) || !(c > 0.0)) throw ConfigError("sphere mass and radius must be positive");
    if (chart < 0 || chart > 2) throw ConfigError("sphere chart must be 0, 1 or 2");
}

ConstrainedSystem sphere_constrained_system(const SphereSystem& sys) {
    sys.validate();
    ConstrainedSystem cs;
    cs.n = 3;
    cs.k = 2;
    const double m = sys.m;
    const double c = sys.c;
    cs.mass_matrix = [m](const Vec&) -> Mat { return m * Mat::Identity(3, 3); };
    cs.potential = [](const Vec&) { return 0.0; };
    cs.potential_gradient = [](const Vec&) -> Vec { return Vec::Zero(3); };
    cs.constant_mass = true;
    cs.constraints.count = 1;
    cs.constraints.g = [c](const Vec& x) {
        Vec g(1);
        g(0) = 0.5 * (x.squaredNorm() - c * c);
        return g;
    };
    cs.constraints.jacobian = [](const Vec& x) -> Mat { return x.transpose(); };
    cs.constraints.hessians = [](const Vec&) { return std::vector<Mat>{Mat::Identity(3, 3)}; };
    cs.labels = {"x1", "x2", "x3"};
    cs.sample_configuration = [c](std::mt19937_64& rng) {
        std::normal_distribution<double> normal(0.0, 1.0);
        Vec x(3);
        for (int i = 0; i < 3; ++i) x(i) = normal(rng);
        return Vec(c * x / x.norm());
    };
    return cs;
}

std::pair<Vec, Vec> sphere_forward(const FullPhaseState& state) {
    const Vec& x = state.q;
    const Vec& p = state.p;
    if (x.size() != 3 || p.size() != 3) throw DimensionError("sphere states are 3-dimensional");
    check_chart(x);
    Vec pi(3);
    pi(0) = p(0) - x(0) / x(2) * p(2);
    pi(1) = p(1) - x(1) / x(2) * p(2);
    pi(2) = x.dot(p);
    return {x, pi};
}

FullPhaseState sphere_backward(const Vec& x, const Vec& pi) {
    if (x.size() != 3 || pi.size() != 3) throw DimensionError("sphere states are 3-dimensional");
    check_chart(x);
    const double s = x(0) * pi(0) + x(1) * pi(1);
    Vec p(3);
    p(2) = x(2) * (pi(2) - s) / x.squaredNorm();
    p(0) = pi(0) + x(0) / x(2) * p(2);
    p(1) = pi(1) + x(1) / x(2) * p(2);
    return {x, p};
}

double sphere_reduced_hamiltonian(const SphereSystem& sys, const Vec& x, const Vec& pi12) {
    const double r2 = x.squaredNorm();
    if (!(r2 > 0.0)) throw DimensionError("reduced sphere Hamiltonian needs x != 0");
    const double s = x(0) * pi12(0) + x(1) * pi12(1);
    return (pi12(0) * pi12(0) + pi12(1) * pi12(1) - s * s / r2) / (2.0 * sys.m);
}

PoissonStructure sphere_structure(const SphereSystem& sys) {
    sys.validate();
    PoissonStructure ps;
    ps.dim = 5;
    ps.labels = {"x1", "x2", "x3", "pi_x1", "pi_x2"};
    ps.kind = StructureKind::intermediate;
    ps.tensor = [](const Vec& z) {
        check_chart(z.head(3));
        Mat w = Mat::Zero(5, 5);
        w(0, 3) = 1.0;
        w(1, 4) = 1.0;
        w(2, 3) = -z(0) / z(2);
        w(2, 4) = -z(1) / z(2);
        return Mat(w - w.transpose());
    };
    return ps;
}

VectorField sphere_vector_field(const SphereSystem& sys) {
    sys.validate();
    const double m = sys.m;
    VectorField f;
    f.dim = 5;
    f.label = "sphere";
    f.eval = [m](const Vec& z) -> Vec {
        if (z.size() != 5) throw DimensionError("sphere field needs 5 coordinates");
        check_chart(z.head(3));
        const std::vector<double> r = sphere_rates(std::vector<double>(z.data(), z.data() + 5), m);
        return Eigen::Map<const Vec>(r.data(), 5);
    };
    f.taylor = jet_taylor([m](const std::vector<Jet>& z) { return sphere_rates(z, m); });
    return f;
}

ScalarFunction sphere_casimir(const SphereSystem& sys) {
    const double c = sys.c;
    ScalarFunction f;
    f.value = [c](const Vec& z) { return z.head(3).squaredNorm() - c * c; };
    f.gradient = [](const Vec& z) {
        Vec g = Vec::Zero(z.size());
        g.head(3) = 2.0 * z.head(3);
        return g;
    };
    return f;
}

ReducedSystem sphere_reduced_system(const SphereSystem& sys, Route route, std::vector<int> chart,
                                    const Tolerances& tol) {
    const ConstrainedSystem base = sphere_constrained_system(sys);
    ReducedSystem rs = reduce(base, route, chart, tol);
    if (route == Route::intermediate && chart == std::vector<int>{2}) {
        rs.reduced_hamiltonian = [sys](const Vec& q, const Vec& pi) {
            return sphere_reduced_hamiltonian(sys, q, pi);
        };
        const std::vector<std::string> labels = rs.reduced_structure.labels;
        rs.reduced_structure = sphere_structure(sys);
        rs.reduced_structure.labels = labels;
        rs.closed_field = sphere_vector_field(sys);
    }
    rs.rebuild = [sys, route, tol](const std::vector<int>& c) {
        return sphere_reduced_system(sys, route, c, tol);
    };
    return rs;
}

FullPhaseState sphere_state(const SphereSystem& sys, const Vec& x, const Vec& v) {
    const Vec xs = sys.c * x / x.norm();
    const Vec vt = v - xs * (xs.dot(v) / xs.squaredNorm());
    return {xs, sys.m * vt};
}

}  // namespace hamred
