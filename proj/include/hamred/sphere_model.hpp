#pragma once

#include <utility>

#include "hamred/lie_series.hpp"
#include "hamred/reduction.hpp"

namespace hamred {

/// Free particle of mass m on the sphere |x| = c.
struct SphereSystem {
    double m = 1.0;
    double c = 1.0;
    int chart = 2;  // pivot coordinate of the printed formulas

    void validate() const;
};

/// Generic form: q = x, G = (x^2 - c^2)/2, M = m 1, U = 0.
ConstrainedSystem sphere_constrained_system(const SphereSystem& sys);

/// (x, p) -> (x, pi) with pi_1 = p_1 - (x_1/x_3) p_3, pi_2 = p_2 - (x_2/x_3) p_3,
/// pi_3 = (x, p). Throws ChartError at x_3 = 0.
std::pair<Vec, Vec> sphere_forward(const FullPhaseState& state);

/// Inverse of sphere_forward.
FullPhaseState sphere_backward(const Vec& x, const Vec& pi);

/// (1/2m) [pi_1^2 + pi_2^2 - (x_1 pi_1 + x_2 pi_2)^2 / x^2].
double sphere_reduced_hamiltonian(const SphereSystem& sys, const Vec& x, const Vec& pi12);

/// Tensor over (x_1, x_2, x_3, pi_1, pi_2) with {x_1, pi_1} = {x_2, pi_2} = 1,
/// {x_3, pi_a} = -x_a / x_3.
PoissonStructure sphere_structure(const SphereSystem& sys);

/// Closed-form field of sphere_structure and the reduced Hamiltonian with an exact
/// Taylor recurrence.
VectorField sphere_vector_field(const SphereSystem& sys);

/// |x|^2 - c^2.
ScalarFunction sphere_casimir(const SphereSystem& sys);

/// Reduced system of a route; the intermediate route in the x_3 chart uses the
/// closed-form Hamiltonian, tensor and field.
ReducedSystem sphere_reduced_system(const SphereSystem& sys, Route route,
                                    std::vector<int> chart = {2}, const Tolerances& tol = {});

/// On-shell state at x with the given Laboratory velocity projected to the tangent plane.
FullPhaseState sphere_state(const SphereSystem& sys, const Vec& x, const Vec& v);

}  // namespace hamred
