#pragma once

#include <random>
#include <string>
#include <vector>

#include "hamred/constraint_geometry.hpp"
#include "hamred/trajectory.hpp"

namespace hamred {

/// Natural Lagrangian L = 1/2 v^T M(q) v - U(q) restricted by holonomic constraints.
struct ConstrainedSystem {
    int n = 0;
    int k = 0;
    MatFn mass_matrix;
    ScalarFn potential;
    ConstraintSpec constraints;
    std::vector<std::string> labels;

    /// Optional analytic dU/dq; finite differences otherwise.
    VecFn potential_gradient;
    /// Skips mass-matrix derivatives when M does not depend on q.
    bool constant_mass = false;
    /// Optional generator of configurations near the surface (projected afterwards).
    std::function<Vec(std::mt19937_64&)> sample_configuration;

    /// Throws DimensionError on inconsistent sizes.
    void validate() const;
    /// Inverse mass matrix; throws DefinitenessError unless M(q) is positive-definite.
    Mat inverse_mass(const Vec& q) const;
    Vec grad_potential(const Vec& q) const;
    /// dM/dq_c for c = 0..n-1.
    std::vector<Mat> mass_derivatives(const Vec& q) const;
};

struct FullPhaseState {
    Vec q;
    Vec p;
};

struct LagrangeMultiplierDiagnostics {
    Vec lambda;
    double constraint_violation = 0.0;
    double velocity_tangency_violation = 0.0;
};

struct MultiplierStep {
    Vec qddot;
    LagrangeMultiplierDiagnostics diag;
};

Vec legendre_velocity(const ConstrainedSystem& sys, const FullPhaseState& state);
Vec legendre_momentum(const ConstrainedSystem& sys, const Vec& q, const Vec& v);

/// 1/2 p^T M^-1 p + U.
double canonical_hamiltonian(const ConstrainedSystem& sys, const FullPhaseState& state);

/// 1/2 v^T M v + U.
double lagrangian_energy(const ConstrainedSystem& sys, const Vec& q, const Vec& v);

/// Unconstrained acceleration of the natural Lagrangian,
/// M^-1 [-(d_c M) v^c v + 1/2 grad(v^T M v) - grad U].
Vec natural_force_term(const ConstrainedSystem& sys, const Vec& q, const Vec& v);

/// The same term for an arbitrary regular Lagrangian L(q, v), every derivative taken
/// by finite differences.
Vec general_force_term(const std::function<double(const Vec&, const Vec&)>& lagrangian,
                       const Vec& q, const Vec& v);

/// Second-order equations with the multipliers eliminated.
/// Throws ReductionError when G M^-1 G^T is singular.
MultiplierStep multiplier_ode_rhs(const ConstrainedSystem& sys, const Vec& q, const Vec& qdot);

/// First-order form over z = (q, qdot).
VectorField multiplier_field(const ConstrainedSystem& sys);

/// Newton projection of q onto G = 0 followed by removal of the normal velocity
/// component, so that Phi(q, p) = 0.
FullPhaseState project_on_shell(const ConstrainedSystem& sys, const FullPhaseState& state,
                                const Tolerances& tol);

/// Random on-shell state: configuration from sample_configuration (or a Gaussian
/// point), momenta Gaussian then projected.
FullPhaseState random_on_shell_state(const ConstrainedSystem& sys, std::mt19937_64& rng,
                                     const Tolerances& tol);

/// Integrates the multiplier ODE from (q, qdot) and records constraint and energy
/// diagnostics per sample.
Trajectory multiplier_flow(const ConstrainedSystem& sys, const Vec& q0, const Vec& v0,
                           TimeSpan span, const Tolerances& tol, double sample_dt = 0.0);

}  // namespace hamred
