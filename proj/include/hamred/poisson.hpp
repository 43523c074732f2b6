#pragma once

#include <string>
#include <vector>

#include "hamred/constraint_geometry.hpp"
#include "hamred/trajectory.hpp"

namespace hamred {

/// Scalar phase-space function with an optional analytic gradient.
struct ScalarFunction {
    ScalarFn value;
    VecFn gradient;

    double operator()(const Vec& z) const { return value(z); }
    Vec grad(const Vec& z) const { return gradient ? gradient(z) : fd_gradient(value, z); }
};

/// Linear coordinate function z -> z_i.
ScalarFunction coordinate_function(int index, int dim);

enum class StructureKind { canonical, intermediate, dirac, chetaev, custom };

std::string to_string(StructureKind kind);

/// Antisymmetric Poisson tensor over labelled coordinates.
struct PoissonStructure {
    int dim = 0;
    std::vector<std::string> labels;
    MatFn tensor;
    StructureKind kind = StructureKind::custom;

    Mat at(const Vec& z) const;
};

/// Canonical structure over (q_1..q_n, p_1..p_n).
PoissonStructure canonical_structure(int n, std::vector<std::string> labels = {});

/// grad f^T omega grad g.
double bracket(const PoissonStructure& ps, const ScalarFunction& f, const ScalarFunction& g,
               const Vec& z);

/// Tensor over (q^A, pi_B) induced by pi = g_full p: {q,q} = 0, {q^A, pi_B} = g_full(B,A),
/// {pi_A, pi_B} = -c_AB^D p_D with p = g_full_inv pi.
Mat intermediate_brackets(const ConstraintSpec& spec, const TangentBasis& basis, const Vec& q,
                          const Vec& pi);

/// The same tensor as a structure over (q, pi) with a frozen chart.
PoissonStructure intermediate_structure(const ConstraintSpec& spec, int n, std::vector<int> pivots);

/// Second-class constraint functions T_I of a phase-space point.
struct ConstraintSet {
    std::vector<ScalarFunction> functions;

    Vec values(const Vec& z) const;
    Mat gradients(const Vec& z) const;  // one row per constraint
};

/// Delta_IJ = {T_I, T_J}.
Mat constraint_brackets(const PoissonStructure& ps, const ConstraintSet& cs, const Vec& z);

/// omega - omega dT^T Delta^-1 dT omega. Throws SecondClassError when Delta is
/// singular (condition number above 1e10).
Mat dirac_tensor(const PoissonStructure& ps, const ConstraintSet& cs, const Vec& z);

double dirac_bracket(const PoissonStructure& ps, const ConstraintSet& cs, const ScalarFunction& f,
                     const ScalarFunction& g, const Vec& z);

PoissonStructure dirac_structure(const PoissonStructure& ps, const ConstraintSet& cs);

/// Tensor derivatives d_l omega by the fourth-order stencil.
std::vector<Mat> tensor_derivatives(const PoissonStructure& ps, const Vec& z);

/// max over (i, j, k) of |sum_cyc omega^il d_l omega^jk|. The tensor is used as given,
/// so a corrupted (non-antisymmetric) tensor still yields a residual.
double jacobi_residual(const PoissonStructure& ps, const Vec& z);

/// Vector field z -> omega(z) grad h(z).
VectorField hamiltonian_field(const PoissonStructure& ps, const ScalarFunction& h);

/// max over an RK trajectory of |C(z(t)) - C(z0)|.
double casimir_drift(const PoissonStructure& ps, const ScalarFunction& casimir,
                     const ScalarFunction& h, const Vec& z0, TimeSpan span, const Tolerances& tol);

}  // namespace hamred
