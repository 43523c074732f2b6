#include "hamred/reduction.hpp"

#include <algorithm>
#include <cmath>

namespace hamred {

namespace {

constexpr double kRechartCondition = 1e6;

std::string coordinate_label(const ConstrainedSystem& sys, int i) {
    return sys.labels.empty() ? "q" + std::to_string(i + 1) : sys.labels[i];
}

std::vector<int> complement(int n, const std::vector<int>& chart) {
    std::vector<int> out;
    for (int c = 0; c < n; ++c)
        if (std::find(chart.begin(), chart.end(), c) == chart.end()) out.push_back(c);
    return out;
}

/// Lower-row block of the reduced tensor over (q, pi_i) given full momenta p.
Mat tangent_tensor(const ConstraintSpec& spec, const TangentBasis& basis, const Vec& q,
                   const Vec& p) {
    const int n = static_cast<int>(q.size());
    const int r = spec.count;
    const int k = n - r;
    Mat w = Mat::Zero(n + k, n + k);
    w.topRightCorner(n, k) = basis.g_lower.transpose();
    w.bottomLeftCorner(k, n) = -basis.g_lower;
    if (k > 1) {
        const StructureFunctions c = structure_functions_exact(spec, basis, q);
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j) {
                double s = 0.0;
                for (int d = 0; d < n; ++d) s -= c(r + i, r + j, d) * p(d);
                w(n + i, n + j) = s;
                w(n + j, n + i) = -s;
            }
    }
    return w;
}

/// Full momenta of the intermediate route.
Vec intermediate_momenta(const ConstrainedSystem& sys, const TangentBasis& basis, const Vec& q,
                         const Vec& pi_i, const Tolerances& tol) {
    const Vec pa = resolve_constraint(sys, basis, q, pi_i, tol);
    Vec pi(sys.n);
    pi << pa, pi_i;
    return basis.g_full_inv * pi;
}

/// p = W^-1 (0, pi_i) with W = [G M^-1; g_lower].
Vec alternative_momenta(const ConstrainedSystem& sys, const TangentBasis& basis, const Vec& q,
                        const Vec& pi_i) {
    const int r = sys.constraints.count;
    Mat w(sys.n, sys.n);
    w << basis.jacobian * sys.inverse_mass(q), basis.g_lower;
    const Mat winv = checked_inverse<VariantError>(w, 1e12, "alternative momenta change is singular");
    Vec pi = Vec::Zero(sys.n);
    pi.tail(sys.n - r) = pi_i;
    return winv * pi;
}

/// Full momenta of the Dirac route: p_F given, p_P solving Phi = 0.
Vec dirac_momenta(const ConstrainedSystem& sys, const std::vector<int>& chart,
                  const std::vector<int>& free, const Vec& q, const Vec& pf, const Tolerances& tol) {
    const int r = sys.constraints.count;
    if (r == 0) return pf;
    const Mat a = sys.constraints.jac(q) * sys.inverse_mass(q);
    Mat ap(r, r), af(r, static_cast<Eigen::Index>(free.size()));
    for (int c = 0; c < r; ++c) ap.col(c) = a.col(chart[c]);
    for (std::size_t c = 0; c < free.size(); ++c) af.col(c) = a.col(free[c]);
    checked_inverse<DefinitenessError>(ap, 1e12, "tertiary constraints cannot be resolved in this chart");
    const auto assemble = [&](const Vec& pp) {
        Vec p(sys.n);
        for (int c = 0; c < r; ++c) p(chart[c]) = pp(c);
        for (std::size_t c = 0; c < free.size(); ++c) p(free[c]) = pf(c);
        return p;
    };
    const NewtonResult res = newton_solve_detailed(
        [&](const Vec& pp) -> Vec { return a * assemble(pp); }, [&](const Vec&) -> Mat { return ap; },
        Vec::Zero(r), tol);
    return assemble(res.x);
}

}  // namespace

std::string to_string(Route route) {
    switch (route) {
        case Route::intermediate: return "intermediate";
        case Route::dirac: return "dirac";
        case Route::alternative: return "alternative";
    }
    return "intermediate";
}

Vec ReducedPhaseState::packed() const {
    Vec z(q.size() + pi.size());
    z << q, pi;
    return z;
}

std::vector<std::string> ReducedSystem::labels() const {
    std::vector<std::string> out;
    for (int i = 0; i < base.n; ++i) out.push_back(coordinate_label(base, i));
    const std::string prefix = route == Route::dirac ? "p_" : "pi_";
    for (int c : free) out.push_back(prefix + coordinate_label(base, c));
    return out;
}

double ReducedSystem::hamiltonian(const Vec& z) const {
    return reduced_hamiltonian(z.head(base.n), z.tail(base.k));
}

FullPhaseState ReducedSystem::to_full(const Vec& z) const {
    return {z.head(base.n), momenta(z.head(base.n), z.tail(base.k))};
}

Vec ReducedSystem::from_full(const FullPhaseState& s) const {
    Vec z(dim());
    z << s.q, reduced_momenta(s.q, s.p);
    return z;
}

double ReducedSystem::chart_condition(const Vec& q) const {
    Mat a = base.constraints.jac(q);
    if (route == Route::dirac) a = a * base.inverse_mass(q);
    return minor_condition(a, chart);
}

VectorField ReducedSystem::vector_field() const {
    if (closed_field.eval) return closed_field;
    VectorField f;
    f.dim = dim();
    f.label = to_string(route);
    const auto self = *this;
    f.eval = [self](const Vec& z) -> Vec {
        const Vec grad = fd_gradient([&self](const Vec& x) { return self.hamiltonian(x); }, z);
        return self.reduced_structure.tensor(z) * grad;
    };
    return f;
}

TertiaryConstraint build_tertiary(const ConstrainedSystem& sys) {
    TertiaryConstraint t;
    t.phi = [sys](const Vec& q, const Vec& p) -> Vec {
        return sys.constraints.jac(q) * (sys.inverse_mass(q) * p);
    };
    t.dphi_dp = [sys](const Vec& q) -> Mat { return sys.constraints.jac(q) * sys.inverse_mass(q); };
    t.dphi_dq = [sys](const Vec& q, const Vec& p) -> Mat {
        const int r = sys.constraints.count;
        const Mat minv = sys.inverse_mass(q);
        const Vec v = minv * p;
        const auto hs = sys.constraints.hess(q);
        Mat d(r, sys.n);
        for (int a = 0; a < r; ++a) d.row(a) = (hs[a] * v).transpose();
        if (!sys.constant_mass) {
            const Mat j = sys.constraints.jac(q);
            const auto dm = sys.mass_derivatives(q);
            for (int e = 0; e < sys.n; ++e) d.col(e) -= j * (minv * (dm[e] * v));
        }
        return d;
    };
    return t;
}

ConstraintSet second_class_constraints(const ConstrainedSystem& sys) {
    ConstraintSet cs;
    const int n = sys.n;
    const int r = sys.constraints.count;
    const TertiaryConstraint t = build_tertiary(sys);
    for (int a = 0; a < r; ++a) {
        ScalarFunction g;
        g.value = [sys, a, n](const Vec& z) { return sys.constraints.value(z.head(n))(a); };
        g.gradient = [sys, a, n](const Vec& z) {
            Vec out = Vec::Zero(2 * n);
            out.head(n) = sys.constraints.jac(z.head(n)).row(a).transpose();
            return out;
        };
        cs.functions.push_back(g);
    }
    for (int a = 0; a < r; ++a) {
        ScalarFunction phi;
        phi.value = [t, a, n](const Vec& z) { return t.phi(z.head(n), z.tail(n))(a); };
        phi.gradient = [t, a, n](const Vec& z) {
            Vec out(2 * n);
            out.head(n) = t.dphi_dq(z.head(n), z.tail(n)).row(a).transpose();
            out.tail(n) = t.dphi_dp(z.head(n)).row(a).transpose();
            return out;
        };
        cs.functions.push_back(phi);
    }
    return cs;
}

NewtonResult resolve_constraint_detailed(const ConstrainedSystem& sys, const TangentBasis& basis,
                                         const Vec& q, const Vec& pi_i, const Tolerances& tol) {
    const int r = sys.constraints.count;
    const Mat a = basis.jacobian * sys.inverse_mass(q) * basis.g_full_inv;
    const Mat aa = a.leftCols(r);
    const Mat ai = a.rightCols(sys.n - r);
    checked_inverse<DefinitenessError>(aa, 1e12, "tertiary constraints cannot be resolved for pi_alpha");
    const Vec rest = ai * pi_i;
    return newton_solve_detailed([&](const Vec& pa) -> Vec { return aa * pa + rest; },
                                 [&](const Vec&) -> Mat { return aa; }, Vec::Zero(r), tol);
}

Vec resolve_constraint(const ConstrainedSystem& sys, const TangentBasis& basis, const Vec& q,
                       const Vec& pi_i, const Tolerances& tol) {
    return resolve_constraint_detailed(sys, basis, q, pi_i, tol).x;
}

std::vector<int> choose_chart(const ConstrainedSystem& sys, Route route, const Vec& q) {
    Mat a = sys.constraints.jac(q);
    if (route == Route::dirac) a = a * sys.inverse_mass(q);
    return select_pivots(a);
}

ReducedSystem reduce_intermediate(const ConstrainedSystem& sys, std::vector<int> chart,
                                  const Tolerances& tol) {
    sys.validate();
    ReducedSystem rs;
    rs.base = sys;
    rs.route = Route::intermediate;
    rs.chart = chart;
    rs.free = complement(sys.n, chart);
    const ConstraintSpec spec = sys.constraints;
    const int n = sys.n;
    const int k = sys.k;
    rs.resolve_pi_alpha = [sys, chart, tol](const Vec& q, const Vec& pi) {
        return resolve_constraint(sys, fundamental_solutions(sys.constraints, q, chart), q, pi, tol);
    };
    rs.momenta = [sys, chart, tol](const Vec& q, const Vec& pi) {
        return intermediate_momenta(sys, fundamental_solutions(sys.constraints, q, chart), q, pi, tol);
    };
    rs.reduced_momenta = [spec, chart](const Vec& q, const Vec& p) -> Vec {
        return fundamental_solutions(spec, q, chart).g_lower * p;
    };
    rs.reduced_hamiltonian = [sys, chart, tol](const Vec& q, const Vec& pi) {
        const TangentBasis b = fundamental_solutions(sys.constraints, q, chart);
        return canonical_hamiltonian(sys, {q, intermediate_momenta(sys, b, q, pi, tol)});
    };
    rs.reduced_structure.dim = n + k;
    rs.reduced_structure.labels = rs.labels();
    rs.reduced_structure.kind = StructureKind::intermediate;
    rs.reduced_structure.tensor = [sys, chart, tol, n, k](const Vec& z) {
        const Vec q = z.head(n);
        const TangentBasis b = fundamental_solutions(sys.constraints, q, chart);
        return tangent_tensor(sys.constraints, b, q,
                              intermediate_momenta(sys, b, q, z.tail(k), tol));
    };
    rs.rebuild = [sys, tol](const std::vector<int>& c) { return reduce_intermediate(sys, c, tol); };
    return rs;
}

ReducedSystem reduce_alternative(const ConstrainedSystem& sys, std::vector<int> chart,
                                 const Tolerances& tol) {
    sys.validate();
    ReducedSystem rs;
    rs.base = sys;
    rs.route = Route::alternative;
    rs.chart = chart;
    rs.free = complement(sys.n, chart);
    const ConstraintSpec spec = sys.constraints;
    const int n = sys.n;
    const int k = sys.k;
    const int r = sys.constraints.count;
    rs.resolve_pi_alpha = [r](const Vec&, const Vec&) -> Vec { return Vec::Zero(r); };
    rs.momenta = [sys, chart](const Vec& q, const Vec& pi) {
        return alternative_momenta(sys, fundamental_solutions(sys.constraints, q, chart), q, pi);
    };
    rs.reduced_momenta = [spec, chart](const Vec& q, const Vec& p) -> Vec {
        return fundamental_solutions(spec, q, chart).g_lower * p;
    };
    rs.reduced_hamiltonian = [sys, chart](const Vec& q, const Vec& pi) {
        const TangentBasis b = fundamental_solutions(sys.constraints, q, chart);
        return canonical_hamiltonian(sys, {q, alternative_momenta(sys, b, q, pi)});
    };
    rs.reduced_structure.dim = n + k;
    rs.reduced_structure.labels = rs.labels();
    rs.reduced_structure.kind = StructureKind::intermediate;
    rs.reduced_structure.tensor = [sys, chart, n, k](const Vec& z) {
        const Vec q = z.head(n);
        const TangentBasis b = fundamental_solutions(sys.constraints, q, chart);
        return tangent_tensor(sys.constraints, b, q, alternative_momenta(sys, b, q, z.tail(k)));
    };
    rs.rebuild = [sys, tol](const std::vector<int>& c) { return reduce_alternative(sys, c, tol); };
    return rs;
}

ReducedSystem reduce_dirac(const ConstrainedSystem& sys, std::vector<int> chart,
                           const Tolerances& tol) {
    sys.validate();
    ReducedSystem rs;
    rs.base = sys;
    rs.route = Route::dirac;
    rs.chart = chart;
    rs.free = complement(sys.n, chart);
    const std::vector<int> free = rs.free;
    const int n = sys.n;
    const int k = sys.k;
    rs.momenta = [sys, chart, free, tol](const Vec& q, const Vec& pf) {
        return dirac_momenta(sys, chart, free, q, pf, tol);
    };
    rs.resolve_pi_alpha = [sys, chart, free, tol](const Vec& q, const Vec& pf) {
        const Vec p = dirac_momenta(sys, chart, free, q, pf, tol);
        Vec out(static_cast<Eigen::Index>(chart.size()));
        for (std::size_t c = 0; c < chart.size(); ++c) out(c) = p(chart[c]);
        return out;
    };
    rs.reduced_momenta = [free](const Vec&, const Vec& p) {
        Vec out(static_cast<Eigen::Index>(free.size()));
        for (std::size_t c = 0; c < free.size(); ++c) out(c) = p(free[c]);
        return out;
    };
    rs.reduced_hamiltonian = [sys, chart, free, tol](const Vec& q, const Vec& pf) {
        return canonical_hamiltonian(sys, {q, dirac_momenta(sys, chart, free, q, pf, tol)});
    };
    const PoissonStructure canon = canonical_structure(n);
    const ConstraintSet cs = second_class_constraints(sys);
    std::vector<int> idx;
    for (int i = 0; i < n; ++i) idx.push_back(i);
    for (int c : free) idx.push_back(n + c);
    rs.reduced_structure.dim = n + k;
    rs.reduced_structure.labels = rs.labels();
    rs.reduced_structure.kind = StructureKind::dirac;
    rs.reduced_structure.tensor = [sys, chart, free, tol, canon, cs, idx, n, k](const Vec& z) {
        Vec full(2 * n);
        full << z.head(n), dirac_momenta(sys, chart, free, z.head(n), z.tail(k), tol);
        const Mat d = dirac_tensor(canon, cs, full);
        Mat w(n + k, n + k);
        for (int a = 0; a < n + k; ++a)
            for (int b = 0; b < n + k; ++b) w(a, b) = d(idx[a], idx[b]);
        return w;
    };
    rs.rebuild = [sys, tol](const std::vector<int>& c) { return reduce_dirac(sys, c, tol); };
    return rs;
}

ReducedSystem reduce(const ConstrainedSystem& sys, Route route, std::vector<int> chart,
                     const Tolerances& tol) {
    switch (route) {
        case Route::intermediate: return reduce_intermediate(sys, std::move(chart), tol);
        case Route::dirac: return reduce_dirac(sys, std::move(chart), tol);
        case Route::alternative: return reduce_alternative(sys, std::move(chart), tol);
    }
    return reduce_intermediate(sys, std::move(chart), tol);
}

VectorField full_dirac_field(const ConstrainedSystem& sys) {
    const PoissonStructure canon = canonical_structure(sys.n);
    const ConstraintSet cs = second_class_constraints(sys);
    VectorField f;
    f.dim = 2 * sys.n;
    f.label = "full_dirac";
    f.eval = [sys, canon, cs](const Vec& z) -> Vec {
        const int n = sys.n;
        const Vec q = z.head(n);
        const Vec p = z.tail(n);
        const Vec v = sys.inverse_mass(q) * p;
        Vec grad(2 * n);
        grad.head(n) = sys.grad_potential(q);
        if (!sys.constant_mass) {
            const auto dm = sys.mass_derivatives(q);
            for (int e = 0; e < n; ++e) grad(e) -= 0.5 * v.dot(dm[e] * v);
        }
        grad.tail(n) = v;
        return dirac_tensor(canon, cs, z) * grad;
    };
    return f;
}

double AffirmationReport::max_deviation() const {
    return std::max({tensor_deviation, pushforward_deviation, field_deviation});
}

AffirmationReport verify_affirmation(const ConstrainedSystem& sys, int samples, std::uint64_t seed,
                                     const Tolerances& tol) {
    AffirmationReport rep;
    rep.samples = samples;
    std::mt19937_64 rng(seed);
    const int n = sys.n;
    const int r = sys.constraints.count;
    const int k = sys.k;
    const PoissonStructure canon = canonical_structure(n);
    const ConstraintSet cs = second_class_constraints(sys);
    const VectorField full_field = full_dirac_field(sys);
    const ConstraintSpec spec = sys.constraints;
    for (int s = 0; s < samples; ++s) {
        const FullPhaseState st = random_on_shell_state(sys, rng, tol);
        const std::vector<int> chart = choose_chart(sys, Route::intermediate, st.q);
        const ReducedSystem inter = reduce_intermediate(sys, chart, tol);
        const ReducedSystem alt = reduce_alternative(sys, chart, tol);
        const ReducedSystem dir = reduce_dirac(sys, choose_chart(sys, Route::dirac, st.q), tol);
        const TangentBasis basis = fundamental_solutions(spec, st.q, chart);
        const Vec zi = inter.from_full(st);
        const Mat reduced = inter.reduced_structure.tensor(zi);

        // Dirac tensor of the (q, pi_B) variables, restricted to (q, pi_i).
        {
            const PoissonStructure ps = intermediate_structure(spec, n, chart);
            ConstraintSet qpi;
            for (int a = 0; a < r; ++a) {
                ScalarFunction g;
                g.value = [spec, a, n](const Vec& z) { return spec.value(z.head(n))(a); };
                qpi.functions.push_back(g);
            }
            for (int a = 0; a < r; ++a) {
                ScalarFunction phi;
                phi.value = [sys, chart, a, n](const Vec& z) {
                    const Vec q = z.head(n);
                    const TangentBasis b = fundamental_solutions(sys.constraints, q, chart);
                    return (b.jacobian * sys.inverse_mass(q) * b.g_full_inv * z.tail(n))(a);
                };
                qpi.functions.push_back(phi);
            }
            Vec z(2 * n);
            z << st.q, basis.g_full * st.p;
            const Mat d = dirac_tensor(ps, qpi, z);
            std::vector<int> idx;
            for (int i = 0; i < n; ++i) idx.push_back(i);
            for (int i = 0; i < k; ++i) idx.push_back(n + r + i);
            for (int a = 0; a < n + k; ++a)
                for (int b = 0; b < n + k; ++b)
                    rep.tensor_deviation =
                        std::max(rep.tensor_deviation, std::abs(d(idx[a], idx[b]) - reduced(a, b)));
        }

        // Canonical Dirac tensor pushed forward by (q, p) -> (q, g_lower p).
        Vec zf(2 * n);
        zf << st.q, st.p;
        {
            const Mat wd = dirac_tensor(canon, cs, zf);
            const auto dg = basis_derivatives(spec, basis, st.q);
            Mat jac = Mat::Zero(n + k, 2 * n);
            jac.topLeftCorner(n, n) = Mat::Identity(n, n);
            for (int i = 0; i < k; ++i) {
                for (int e = 0; e < n; ++e) jac(n + i, e) = dg[e].row(r + i).dot(st.p);
                jac.block(n + i, n, 1, n) = basis.g_lower.row(i);
            }
            const Mat pushed = jac * wd * jac.transpose();
            rep.pushforward_deviation =
                std::max(rep.pushforward_deviation, max_abs(pushed - reduced));
        }

        // Vector fields of every route in (q, p).
        {
            const Vec reference = full_field(zf);
            const auto compare = [&](const ReducedSystem& rs) {
                const Vec z = rs.from_full(st);
                const Vec rate = rs.vector_field()(z);
                const Vec lifted = fd_directional(
                    [&rs](const Vec& x) -> Vec {
                        const FullPhaseState f = rs.to_full(x);
                        Vec out(2 * f.q.size());
                        out << f.q, f.p;
                        return out;
                    },
                    z, rate);
                rep.field_deviation =
                    std::max(rep.field_deviation, (lifted - reference).cwiseAbs().maxCoeff());
            };
            compare(inter);
            compare(dir);
            compare(alt);
        }
    }
    return rep;
}

ReducedPhaseState reduced_state(const ReducedSystem& rs, const FullPhaseState& s) {
    ReducedPhaseState z;
    z.q = s.q;
    z.pi = rs.reduced_momenta(s.q, s.p);
    z.chart = rs.chart;
    return z;
}

Trajectory reduced_flow(const ReducedSystem& rs0, const ReducedPhaseState& z0, TimeSpan span,
                        const Tolerances& tol, double sample_dt) {
    ReducedSystem rs = (!z0.chart.empty() && z0.chart != rs0.chart) ? rs0.rebuild(z0.chart) : rs0;
    const ConstrainedSystem& sys = rs.base;
    FullPhaseState full = rs.to_full(z0.packed());
    full = project_on_shell(sys, full, tol);
    Vec z = rs.from_full(full);
    const double dt = sample_dt > 0.0 ? sample_dt : (span.t1 - span.t0) / 20.0;
    const auto grid = sample_grid(span, dt);
    const double h0 = rs.hamiltonian(z);
    const TertiaryConstraint tert = build_tertiary(sys);

    Trajectory tr;
    tr.labels = rs.labels();
    const auto record = [&](double t) {
        Sample s{t, z, {}};
        const Vec q = z.head(sys.n);
        const FullPhaseState f = rs.to_full(z);
        s.diagnostics["constraint_residual"] =
            sys.constraints.count ? sys.constraints.value(q).cwiseAbs().maxCoeff() : 0.0;
        s.diagnostics["tertiary_residual"] =
            sys.constraints.count ? tert.phi(f.q, f.p).cwiseAbs().maxCoeff() : 0.0;
        s.diagnostics["energy_drift"] = std::abs(rs.hamiltonian(z) - h0);
        s.diagnostics["jacobi_residual"] = jacobi_residual(rs.reduced_structure, z);
        tr.samples.push_back(std::move(s));
    };
    record(grid.front());
    VectorField field = rs.vector_field();
    const auto rechart = [&](double t) {
        const FullPhaseState f = rs.to_full(z);
        const std::vector<int> next = choose_chart(sys, rs.route, f.q);
        if (next == rs.chart) return false;
        tr.events.push_back({t, rs.chart, next});
        rs = rs.rebuild(next);
        z = rs.from_full(f);
        field = rs.vector_field();
        return true;
    };
    for (std::size_t i = 1; i < grid.size(); ++i) {
        try {
            z = rk_advance(field, z, {grid[i - 1], grid[i]}, tol);
        } catch (const Error&) {
            if (!sys.constraints.count || !rechart(grid[i - 1])) throw;
            z = rk_advance(field, z, {grid[i - 1], grid[i]}, tol);
        }
        if (sys.constraints.count && rs.chart_condition(z.head(sys.n)) > kRechartCondition)
            rechart(grid[i]);
        record(grid[i]);
    }
    return tr;
}

double RouteComparison::max() const { return std::max({intermediate, dirac, alternative}); }

RouteComparison compare_routes(const ConstrainedSystem& sys, const FullPhaseState& s0,
                               TimeSpan span, const Tolerances& tol, double sample_dt,
                               const std::function<ReducedSystem(Route, const std::vector<int>&)>& builder) {
    const Vec v0 = legendre_velocity(sys, s0);
    const Trajectory ref = multiplier_flow(sys, s0.q, v0, span, tol, sample_dt);
    RouteComparison out;
    for (Route route : {Route::intermediate, Route::dirac, Route::alternative}) {
        const std::vector<int> chart = choose_chart(sys, route, s0.q);
        const ReducedSystem rs = builder ? builder(route, chart) : reduce(sys, route, chart, tol);
        const Trajectory tr = reduced_flow(rs, reduced_state(rs, s0), span, tol, sample_dt);
        double dev = 0.0;
        const std::size_t m = std::min(tr.samples.size(), ref.samples.size());
        for (std::size_t i = 0; i < m; ++i)
            dev = std::max(dev, (tr.samples[i].z.head(sys.n) - ref.samples[i].z.head(sys.n))
                                    .cwiseAbs()
                                    .maxCoeff());
        if (tr.samples.size() != ref.samples.size()) dev = INFINITY;
        switch (route) {
            case Route::intermediate: out.intermediate = dev; break;
            case Route::dirac: out.dirac = dev; break;
            case Route::alternative: out.alternative = dev; break;
        }
    }
    return out;
}

}  // namespace hamred
