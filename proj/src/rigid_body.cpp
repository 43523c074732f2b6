#include "hamred/rigid_body.hpp"

#include <cmath>

#include "hamred/lie_series.hpp"

namespace hamred {

namespace {

int eps(int i, int j, int k) {
    if (i == j || j == k || i == k) return 0;
    return ((j - i + 3) % 3 == 1) ? 1 : -1;
}

/// Upper-triangle enumeration of the orthogonality constraints.
const std::vector<std::pair<int, int>>& constraint_pairs() {
    static const std::vector<std::pair<int, int>> pairs = {{0, 0}, {0, 1}, {0, 2},
                                                           {1, 1}, {1, 2}, {2, 2}};
    return pairs;
}

Mat inverse_inertia(const InertiaData& inertia) {
    return checked_inverse<DefinitenessError>(inertia.I, 1e12, "inertia tensor is singular");
}

double max_offdiag(const Mat& m) {
    Mat d = m;
    d.diagonal().setZero();
    return max_abs(d);
}

}  // namespace

bool InertiaData::diagonal() const { return max_offdiag(g) <= 1e-12 * (1.0 + max_abs(g)); }

Mat inertia_tensor(const Mat& g) { return g.trace() * Mat::Identity(3, 3) - g; }

InertiaData inertia_from_particles(const std::vector<Particle>& particles) {
    Mat g = Mat::Zero(3, 3);
    for (const auto& p : particles) {
        if (p.position.size() != 3) throw DimensionError("particle positions are 3-vectors");
        if (!(p.mass > 0.0)) throw ConfigError("particle masses must be positive");
        g += p.mass * p.position * p.position.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(g);
    const Vec gi = es.eigenvalues();
    if (!(gi(0) > 1e-12 * (1.0 + gi(2)))) throw PlanarityError("particles lie in a plane");
    InertiaData out;
    out.frame = es.eigenvectors();
    if (out.frame.determinant() < 0) out.frame.col(2) *= -1.0;
    out.g = gi.asDiagonal();
    out.I = inertia_tensor(out.g);
    return out;
}

InertiaData inertia_from_mass_matrix(const Mat& g) {
    if (g.rows() != 3 || g.cols() != 3) throw DimensionError("mass matrix g must be 3 x 3");
    if (!is_symmetric(g)) throw SymmetryError("mass matrix g is not symmetric");
    if (Eigen::LLT<Mat>(g).info() != Eigen::Success)
        throw PlanarityError("mass matrix g is not positive-definite");
    InertiaData out;
    out.g = g;
    out.I = inertia_tensor(g);
    return out;
}

InertiaData inertia_from_moments(const Vec& moments) {
    if (moments.size() != 3) throw DimensionError("three principal moments expected");
    Vec g(3);
    for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3;
        const int k = (i + 2) % 3;
        g(i) = 0.5 * (moments(j) + moments(k) - moments(i));
        if (g(i) < -1e-12 * (1.0 + moments.cwiseAbs().maxCoeff()))
            throw PlanarityError("principal moments violate the triangle inequality");
        if (!(moments(i) > 0.0)) throw PlanarityError("principal moments must be positive");
    }
    InertiaData out;
    out.g = g.cwiseMax(0.0).asDiagonal();
    out.I = moments.asDiagonal();
    return out;
}

Vec BodyState::packed() const {
    Vec z(12);
    z << flatten(R), M;
    return z;
}

BodyState BodyState::unpack(const Vec& z) {
    if (z.size() != 12) throw DimensionError("body states are 12-dimensional");
    return {unflatten(z.head(9)), z.tail(3)};
}

Mat hat(const Vec& a) {
    Mat h(3, 3);
    h << 0.0, -a(2), a(1), a(2), 0.0, -a(0), -a(1), a(0), 0.0;
    return h;
}

Vec flatten(const Mat& m) {
    Vec v(9);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) v(3 * a + b) = m(a, b);
    return v;
}

Mat unflatten(const Vec& v) {
    Mat m(3, 3);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) m(a, b) = v(3 * a + b);
    return m;
}

MomentumSplit momentum_split(const Mat& R, const Mat& p) {
    const Mat rinv = checked_inverse<RankError>(R, 1e12, "rotational coordinates are singular");
    const Mat a = rinv * p;
    MomentumSplit out;
    out.S = a + a.transpose();
    out.M = Vec::Zero(3);
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) out.M(k) -= eps(k, i, j) * a(i, j);
    return out;
}

Mat momentum_reconstruct(const Mat& R, const Mat& S, const Vec& M) {
    // eps.M = -hat(M)
    return 0.5 * R * (S + hat(M));
}

Mat resolve_S(const InertiaData& inertia, const Vec& M) {
    if (!inertia.diagonal()) throw ReductionError("resolve_S needs the principal-axis frame");
    const Vec g = inertia.g_diag();
    Mat s = Mat::Zero(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            const int k = 3 - i - j;
            s(i, j) = (g(i) - g(j)) / (g(i) + g(j)) * eps(i, j, k) * M(k);
        }
    return s;
}

PoissonStructure rigid_body_structure(BodyBracket kind) {
    PoissonStructure ps;
    ps.dim = 12;
    for (int a = 1; a <= 3; ++a)
        for (int b = 1; b <= 3; ++b) ps.labels.push_back("R" + std::to_string(a) + std::to_string(b));
    for (int i = 1; i <= 3; ++i) ps.labels.push_back("M" + std::to_string(i));
    ps.kind = kind == BodyBracket::full ? StructureKind::custom : StructureKind::chetaev;
    ps.tensor = [kind](const Vec& z) {
        const Mat R = unflatten(z.head(9));
        const Vec M = z.tail(3);
        Vec km = M;
        Mat rt = R;
        if (kind == BodyBracket::full) {
            const Mat rinv = checked_inverse<RankError>(R, 1e12, "rotational coordinates are singular");
            km = rinv * rinv.transpose() * M;
            rt = rinv.transpose();
        }
        Mat w = Mat::Zero(12, 12);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                const int k = 3 - i - j;
                if (i != j) w(9 + i, 9 + j) = -eps(i, j, k) * km(k);
            }
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) {
                    double s = 0.0;
                    for (int m = 0; m < 3; ++m) s -= eps(i, k, m) * rt(j, m);
                    w(9 + i, 3 * j + k) = s;
                    w(3 * j + k, 9 + i) = -s;
                }
        return w;
    };
    return ps;
}

BodyRates euler_poisson_rhs(const InertiaData& inertia, const BodyState& state) {
    const Vec omega = inverse_inertia(inertia) * state.M;
    return {state.R * hat(omega), hat(state.M) * omega};
}

VectorField euler_poisson_field(const InertiaData& inertia) {
    const Mat iinv = inverse_inertia(inertia);
    VectorField f;
    f.dim = 12;
    f.label = "euler_poisson";
    f.eval = [iinv](const Vec& z) -> Vec {
        const Mat R = unflatten(z.head(9));
        const Vec M = z.tail(3);
        const Vec omega = iinv * M;
        Vec out(12);
        out << flatten(R * hat(omega)), hat(M) * omega;
        return out;
    };
    f.taylor = [iinv](const Vec& z, int order) {
        std::vector<Mat> r{unflatten(z.head(9))};
        std::vector<Vec> m{z.tail(3)};
        std::vector<Vec> w{iinv * m[0]};
        for (int n = 0; n < order; ++n) {
            Mat rn = Mat::Zero(3, 3);
            Vec mn = Vec::Zero(3);
            for (int j = 0; j <= n; ++j) {
                rn += r[j] * hat(w[n - j]);
                mn += hat(m[j]) * w[n - j];
            }
            r.push_back(rn / (n + 1));
            m.push_back(mn / (n + 1));
            w.push_back(iinv * m.back());
        }
        std::vector<Vec> out;
        for (int n = 0; n <= order; ++n) {
            Vec c(12);
            c << flatten(r[n]), m[n];
            out.push_back(std::move(c));
        }
        return out;
    };
    return f;
}

double hamiltonian_body(const InertiaData& inertia, const BodyState& state) {
    return 0.5 * state.M.dot(inverse_inertia(inertia) * state.M);
}

double hamiltonian_body_split(const InertiaData& inertia, const Mat& S, const Vec& M) {
    if (!inertia.diagonal()) throw ReductionError("split Hamiltonian needs the principal-axis frame");
    const Vec g = inertia.g_diag();
    const Mat big_p = S + hat(M);
    double h = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) h += big_p(i, j) * big_p(i, j) / g(j);
    return h / 8.0;
}

ScalarFunction body_hamiltonian_function(const InertiaData& inertia) {
    const Mat iinv = inverse_inertia(inertia);
    ScalarFunction h;
    h.value = [iinv](const Vec& z) { return 0.5 * z.tail(3).dot(iinv * z.tail(3)); };
    h.gradient = [iinv](const Vec& z) {
        Vec g = Vec::Zero(12);
        g.tail(3) = iinv * z.tail(3);
        return g;
    };
    return h;
}

Trajectory simulate_body(const InertiaData& inertia, const Vec& omega0, TimeSpan span,
                         const BodyMethod& method, const Tolerances& tol, double sample_dt) {
    if (omega0.size() != 3) throw DimensionError("initial angular velocity is a 3-vector");
    BodyState s0;
    s0.M = inertia.I * omega0;
    const VectorField field = euler_poisson_field(inertia);
    const ScalarFunction h = body_hamiltonian_function(inertia);
    Trajectory tr;
    if (method.kind == BodyMethod::Kind::rk) {
        tr = rk_integrate(field, s0.packed(), span, tol, sample_dt);
        tr.labels = rigid_body_structure(BodyBracket::chetaev).labels;
    } else {
        tr = lie_solve_hamiltonian(rigid_body_structure(BodyBracket::chetaev), h, s0.packed(), span,
                                   method.order, method.step, field.taylor, sample_dt);
    }
    const double c0 = s0.M.squaredNorm();
    const double h0 = h(s0.packed());
    const auto rel = [](double v, double ref) { return std::abs(v - ref) / (ref > 0.0 ? ref : 1.0); };
    for (auto& s : tr.samples) {
        const BodyState b = BodyState::unpack(s.z);
        s.diagnostics["orthogonality"] = max_abs(b.R.transpose() * b.R - Mat::Identity(3, 3));
        s.diagnostics["casimir_drift"] = rel(b.M.squaredNorm(), c0);
        s.diagnostics["energy_drift"] = rel(h(s.z), h0);
    }
    return tr;
}

ConstrainedSystem rigid_body_system(const InertiaData& inertia) {
    const Mat g = inertia.g;
    if (Eigen::LLT<Mat>(g).info() != Eigen::Success)
        throw PlanarityError("the nine-coordinate system needs a non-planar body");
    ConstrainedSystem sys;
    sys.n = 9;
    sys.k = 3;
    Mat mass = Mat::Zero(9, 9);
    for (int a = 0; a < 3; ++a) mass.block(3 * a, 3 * a, 3, 3) = g;
    sys.mass_matrix = [mass](const Vec&) { return mass; };
    sys.potential = [](const Vec&) { return 0.0; };
    sys.potential_gradient = [](const Vec&) -> Vec { return Vec::Zero(9); };
    sys.constant_mass = true;
    sys.constraints.count = 6;
    sys.constraints.g = [](const Vec& q) {
        const Mat R = unflatten(q);
        const Mat c = R.transpose() * R - Mat::Identity(3, 3);
        Vec out(6);
        for (std::size_t a = 0; a < 6; ++a) out(a) = c(constraint_pairs()[a].first, constraint_pairs()[a].second);
        return out;
    };
    sys.constraints.jacobian = [](const Vec& q) {
        const Mat R = unflatten(q);
        Mat j = Mat::Zero(6, 9);
        for (std::size_t al = 0; al < 6; ++al) {
            const auto [i, k] = constraint_pairs()[al];
            for (int a = 0; a < 3; ++a) {
                j(al, 3 * a + i) += R(a, k);
                j(al, 3 * a + k) += R(a, i);
            }
        }
        return j;
    };
    sys.constraints.hessians = [](const Vec&) {
        std::vector<Mat> hs;
        for (const auto& [i, k] : constraint_pairs()) {
            Mat h = Mat::Zero(9, 9);
            for (int a = 0; a < 3; ++a) {
                h(3 * a + i, 3 * a + k) += 1.0;
                h(3 * a + k, 3 * a + i) += 1.0;
            }
            hs.push_back(h);
        }
        return hs;
    };
    for (int a = 1; a <= 3; ++a)
        for (int b = 1; b <= 3; ++b) sys.labels.push_back("R" + std::to_string(a) + std::to_string(b));
    sys.sample_configuration = [](std::mt19937_64& rng) { return flatten(random_rotation(rng)); };
    return sys;
}

ReducedSystem rigid_body_reduced_system(const InertiaData& inertia, Route route,
                                        std::vector<int> chart, const Tolerances& tol) {
    ReducedSystem rs = reduce(rigid_body_system(inertia), route, chart, tol);
    const auto momenta = rs.momenta;
    rs.reduced_hamiltonian = [inertia, momenta](const Vec& q, const Vec& pi) {
        const Mat R = unflatten(q);
        const Vec M = momentum_split(R, unflatten(momenta(q, pi))).M;
        return hamiltonian_body(inertia, {R, M});
    };
    rs.rebuild = [inertia, route, tol](const std::vector<int>& c) {
        return rigid_body_reduced_system(inertia, route, c, tol);
    };
    return rs;
}

BodyState body_state(const FullPhaseState& s) {
    const Mat R = unflatten(s.q);
    return {R, momentum_split(R, unflatten(s.p)).M};
}

BodyRates reduced_body_rates(const ReducedSystem& rs, const FullPhaseState& s) {
    const Vec z = rs.from_full(s);
    const Vec rate = rs.vector_field()(z);
    const Vec mdot =
        fd_directional([&rs](const Vec& x) -> Vec { return body_state(rs.to_full(x)).M; }, z, rate);
    return {unflatten(rate.head(9)), mdot};
}

Mat random_rotation(std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::Quaterniond q(normal(rng), normal(rng), normal(rng), normal(rng));
    q.normalize();
    return q.toRotationMatrix();
}

Mat random_invertible(std::mt19937_64& rng, double smin, double smax) {
    std::uniform_real_distribution<double> uniform(smin, smax);
    const Mat u = random_rotation(rng);
    const Mat v = random_rotation(rng);
    Vec s(3);
    for (int i = 0; i < 3; ++i) s(i) = uniform(rng);
    return u * s.asDiagonal() * v.transpose();
}

}  // namespace hamred
