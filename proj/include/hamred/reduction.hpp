#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hamred/lagrangian.hpp"
#include "hamred/poisson.hpp"

namespace hamred {

enum class Route { intermediate, dirac, alternative };

std::string to_string(Route route);

/// Coordinates (q, pi_i) of the intermediate submanifold in a given chart.
struct ReducedPhaseState {
    Vec q;
    Vec pi;
    std::vector<int> chart;
    bool on_shell = true;

    Vec packed() const;
};

/// Hamiltonian system on the intermediate submanifold for one chart.
///
/// For the intermediate and alternative routes pi are the tangent momenta
/// g_lower p and the chart is the pivot set of the constraint Jacobian. For the
/// Dirac route pi are the free canonical momenta p_F and the chart is the pivot set
/// of G M^-1.
struct ReducedSystem {
    ConstrainedSystem base;
    Route route = Route::intermediate;
    std::vector<int> chart;
    std::vector<int> free;
    std::function<Vec(const Vec& q, const Vec& pi)> resolve_pi_alpha;
    std::function<double(const Vec& q, const Vec& pi)> reduced_hamiltonian;
    PoissonStructure reduced_structure;
    /// Full canonical momenta reconstructed from (q, pi).
    std::function<Vec(const Vec& q, const Vec& pi)> momenta;
    /// Reduced momenta of a full state.
    std::function<Vec(const Vec& q, const Vec& p)> reduced_momenta;
    /// Builds the same system in another chart (keeps closed-form overrides).
    std::function<ReducedSystem(const std::vector<int>&)> rebuild;
    /// Closed-form reduced field; vector_field() returns it when set.
    VectorField closed_field;

    int dim() const { return base.n + base.k; }
    std::vector<std::string> labels() const;
    double hamiltonian(const Vec& z) const;
    FullPhaseState to_full(const Vec& z) const;
    Vec from_full(const FullPhaseState& s) const;
    double chart_condition(const Vec& q) const;
    /// z -> omega'(z) grad H'(z) with a fourth-order gradient, or the closed-form field.
    VectorField vector_field() const;
};

/// Phi_a(q, p) = G_aB v^B(q, p).
struct TertiaryConstraint {
    std::function<Vec(const Vec& q, const Vec& p)> phi;
    /// d Phi / d p = G M^-1.
    MatFn dphi_dp;
    /// d Phi / d q.
    std::function<Mat(const Vec& q, const Vec& p)> dphi_dq;
};

TertiaryConstraint build_tertiary(const ConstrainedSystem& sys);

/// Constraint functions (G_a, Phi_a) over the canonical coordinates (q, p).
ConstraintSet second_class_constraints(const ConstrainedSystem& sys);

/// pi_alpha solving Phi(q, g_full_inv (pi_alpha, pi_i)) = 0 by Newton.
/// Throws DefinitenessError when the resolution matrix is singular.
NewtonResult resolve_constraint_detailed(const ConstrainedSystem& sys, const TangentBasis& basis,
                                         const Vec& q, const Vec& pi_i, const Tolerances& tol);
Vec resolve_constraint(const ConstrainedSystem& sys, const TangentBasis& basis, const Vec& q,
                       const Vec& pi_i, const Tolerances& tol);

/// Default chart of a route at q.
std::vector<int> choose_chart(const ConstrainedSystem& sys, Route route, const Vec& q);

ReducedSystem reduce_intermediate(const ConstrainedSystem& sys, std::vector<int> chart,
                                  const Tolerances& tol = {});
ReducedSystem reduce_dirac(const ConstrainedSystem& sys, std::vector<int> chart,
                           const Tolerances& tol = {});
/// Throws VariantError when the alternative momenta change is not invertible.
ReducedSystem reduce_alternative(const ConstrainedSystem& sys, std::vector<int> chart,
                                 const Tolerances& tol = {});
ReducedSystem reduce(const ConstrainedSystem& sys, Route route, std::vector<int> chart,
                     const Tolerances& tol = {});

/// omega_D grad H_0 on the full phase space (q, p).
VectorField full_dirac_field(const ConstrainedSystem& sys);

struct AffirmationReport {
    int samples = 0;
    double tensor_deviation = 0.0;       // reduced tensor vs Dirac tensor in (q, pi)
    double pushforward_deviation = 0.0;  // reduced tensor vs canonical Dirac tensor pushed forward
    double field_deviation = 0.0;        // route vector fields in (q, p)
    double max_deviation() const;
};

AffirmationReport verify_affirmation(const ConstrainedSystem& sys, int samples,
                                     std::uint64_t seed = 42, const Tolerances& tol = {});

/// Integrates the reduced field between sample times; diagnostics per sample are
/// constraint_residual, energy_drift, jacobi_residual and tertiary_residual. When the
/// pivot minor condition exceeds 1e6, or a segment fails in the current chart, the
/// state is moved to the best chart and a ChartEvent is recorded.
Trajectory reduced_flow(const ReducedSystem& rs, const ReducedPhaseState& z0, TimeSpan span,
                        const Tolerances& tol, double sample_dt = 0.0);

/// Reduced state of a full state in the system's chart.
ReducedPhaseState reduced_state(const ReducedSystem& rs, const FullPhaseState& s);

struct RouteComparison {
    double intermediate = 0.0;  // max |q - q_multiplier| over the samples
    double dirac = 0.0;
    double alternative = 0.0;
    double max() const;
};

/// Runs the three reduced flows and the multiplier ODE from the same physical state
/// and compares configurations at common sample times.
RouteComparison compare_routes(const ConstrainedSystem& sys, const FullPhaseState& s0,
                               TimeSpan span, const Tolerances& tol, double sample_dt,
                               const std::function<ReducedSystem(Route, const std::vector<int>&)>&
                                   builder = {});

}  // namespace hamred
