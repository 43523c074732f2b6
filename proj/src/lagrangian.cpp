#include "hamred/lagrangian.hpp"

#include <cmath>

namespace hamred {

void ConstrainedSystem::validate() const {
    if (n < 1 || k < 0 || k > n) throw DimensionError("invalid configuration or surface dimension");
    if (constraints.count != n - k) throw DimensionError("constraint count must equal n - k");
    if (!mass_matrix || !potential || !constraints.g)
        throw DimensionError("system needs a mass matrix, a potential and constraint functions");
    if (!labels.empty() && static_cast<int>(labels.size()) != n)
        throw DimensionError("label count must equal n");
}

Mat ConstrainedSystem::inverse_mass(const Vec& q) const {
    const Mat m = mass_matrix(q);
    if (m.rows() != n || m.cols() != n) throw DimensionError("mass matrix has the wrong shape");
    if (!is_symmetric(m)) throw SymmetryError("mass matrix is not symmetric");
    Eigen::LLT<Mat> llt(m);
    if (llt.info() != Eigen::Success) throw DefinitenessError("mass matrix is not positive-definite");
    return llt.solve(Mat::Identity(n, n));
}

Vec ConstrainedSystem::grad_potential(const Vec& q) const {
    if (potential_gradient) return potential_gradient(q);
    return fd_gradient(potential, q);
}

std::vector<Mat> ConstrainedSystem::mass_derivatives(const Vec& q) const {
    std::vector<Mat> d(n, Mat::Zero(n, n));
    if (constant_mass) return d;
    Vec qp = q;
    for (int c = 0; c < n; ++c) {
        const double h = kFd4Step * (1.0 + std::abs(q(c)));
        qp(c) = q(c) + 2 * h;
        const Mat m2p = mass_matrix(qp);
        qp(c) = q(c) + h;
        const Mat m1p = mass_matrix(qp);
        qp(c) = q(c) - h;
        const Mat m1m = mass_matrix(qp);
        qp(c) = q(c) - 2 * h;
        const Mat m2m = mass_matrix(qp);
        qp(c) = q(c);
        d[c] = (-m2p + 8.0 * m1p - 8.0 * m1m + m2m) / (12.0 * h);
    }
    return d;
}

Vec legendre_velocity(const ConstrainedSystem& sys, const FullPhaseState& state) {
    return sys.inverse_mass(state.q) * state.p;
}

Vec legendre_momentum(const ConstrainedSystem& sys, const Vec& q, const Vec& v) {
    return sys.mass_matrix(q) * v;
}

double canonical_hamiltonian(const ConstrainedSystem& sys, const FullPhaseState& state) {
    return 0.5 * state.p.dot(sys.inverse_mass(state.q) * state.p) + sys.potential(state.q);
}

double lagrangian_energy(const ConstrainedSystem& sys, const Vec& q, const Vec& v) {
    return 0.5 * v.dot(sys.mass_matrix(q) * v) + sys.potential(q);
}

Vec natural_force_term(const ConstrainedSystem& sys, const Vec& q, const Vec& v) {
    Vec f = -sys.grad_potential(q);
    if (!sys.constant_mass) {
        const auto dm = sys.mass_derivatives(q);
        for (int b = 0; b < sys.n; ++b) f(b) += 0.5 * v.dot(dm[b] * v);
        for (int c = 0; c < sys.n; ++c) f -= v(c) * (dm[c] * v);
    }
    return sys.inverse_mass(q) * f;
}

Vec general_force_term(const std::function<double(const Vec&, const Vec&)>& lagrangian,
                       const Vec& q, const Vec& v) {
    const auto dl_dv = [&](const Vec& qq, const Vec& vv) {
        return fd_gradient([&](const Vec& w) { return lagrangian(qq, w); }, vv);
    };
    Tolerances tol;
    const Mat hess = fd_jacobian([&](const Vec& w) { return dl_dv(q, w); }, v, tol,
                                 FdScheme::central4);
    const Vec mixed = fd_directional([&](const Vec& qq) { return dl_dv(qq, v); }, q, v);
    const Vec dl_dq = fd_gradient([&](const Vec& qq) { return lagrangian(qq, v); }, q);
    const Mat sym = 0.5 * (hess + hess.transpose());
    return sym.ldlt().solve(dl_dq - mixed);
}

MultiplierStep multiplier_ode_rhs(const ConstrainedSystem& sys, const Vec& q, const Vec& qdot) {
    const Mat minv = sys.inverse_mass(q);
    const Mat j = sys.constraints.jac(q);
    const auto hs = sys.constraints.hess(q);
    const Vec kf = natural_force_term(sys, q, qdot);
    const int r = sys.constraints.count;
    Vec rhs(r);
    for (int a = 0; a < r; ++a) rhs(a) = j.row(a).dot(kf) + qdot.dot(hs[a] * qdot);
    MultiplierStep out;
    if (r > 0) {
        const Mat c = j * minv * j.transpose();
        const Mat cinv = checked_inverse<ReductionError>(
            c, 1e12, "constraint matrix G M^-1 G^T is singular");
        out.diag.lambda = cinv * rhs;
        out.qddot = kf - minv * j.transpose() * out.diag.lambda;
        out.diag.constraint_violation = sys.constraints.value(q).cwiseAbs().maxCoeff();
        out.diag.velocity_tangency_violation = (j * qdot).cwiseAbs().maxCoeff();
    } else {
        out.diag.lambda = Vec(0);
        out.qddot = kf;
    }
    return out;
}

VectorField multiplier_field(const ConstrainedSystem& sys) {
    VectorField f;
    f.dim = 2 * sys.n;
    f.label = "multiplier_ode";
    f.eval = [sys](const Vec& z) {
        const int n = sys.n;
        Vec out(2 * n);
        out.head(n) = z.tail(n);
        out.tail(n) = multiplier_ode_rhs(sys, z.head(n), z.tail(n)).qddot;
        return out;
    };
    return f;
}

FullPhaseState project_on_shell(const ConstrainedSystem& sys, const FullPhaseState& state,
                                const Tolerances& tol) {
    FullPhaseState out;
    out.q = project_to_surface(sys.constraints, state.q, tol);
    out.p = state.p;
    if (sys.constraints.count == 0) return out;
    const Mat minv = sys.inverse_mass(out.q);
    const Mat j = sys.constraints.jac(out.q);
    const Mat c = j * minv * j.transpose();
    out.p -= j.transpose() * c.ldlt().solve(j * minv * out.p);
    return out;
}

FullPhaseState random_on_shell_state(const ConstrainedSystem& sys, std::mt19937_64& rng,
                                     const Tolerances& tol) {
    std::normal_distribution<double> normal(0.0, 1.0);
    FullPhaseState s;
    if (sys.sample_configuration) {
        s.q = sys.sample_configuration(rng);
    } else {
        s.q = Vec(sys.n);
        for (int i = 0; i < sys.n; ++i) s.q(i) = normal(rng);
    }
    s.p = Vec(sys.n);
    for (int i = 0; i < sys.n; ++i) s.p(i) = normal(rng);
    return project_on_shell(sys, s, tol);
}

Trajectory multiplier_flow(const ConstrainedSystem& sys, const Vec& q0, const Vec& v0,
                           TimeSpan span, const Tolerances& tol, double sample_dt) {
    const VectorField field = multiplier_field(sys);
    Vec z0(2 * sys.n);
    z0 << q0, v0;
    Trajectory tr = rk_integrate(field, z0, span, tol, sample_dt);
    const auto label = [&sys](int i) {
        return sys.labels.empty() ? "q" + std::to_string(i + 1) : sys.labels[i];
    };
    for (int i = 0; i < sys.n; ++i) tr.labels.push_back(label(i));
    for (int i = 0; i < sys.n; ++i) tr.labels.push_back("d" + label(i));
    const double e0 = lagrangian_energy(sys, q0, v0);
    for (auto& s : tr.samples) {
        const Vec q = s.z.head(sys.n);
        const Vec v = s.z.tail(sys.n);
        s.diagnostics["constraint_residual"] =
            sys.constraints.count ? sys.constraints.value(q).cwiseAbs().maxCoeff() : 0.0;
        s.diagnostics["tangency_residual"] =
            sys.constraints.count ? (sys.constraints.jac(q) * v).cwiseAbs().maxCoeff() : 0.0;
        s.diagnostics["energy_drift"] = std::abs(lagrangian_energy(sys, q, v) - e0);
    }
    return tr;
}

}  // namespace hamred
