#pragma once

#include <vector>

#include "hamred/numeric_core.hpp"

namespace hamred {

using HessianFn = std::function<std::vector<Mat>(const Vec&)>;

/// Holonomic constraints G_a(q) = 0 with optional analytic derivatives.
struct ConstraintSpec {
    int count = 0;
    VecFn g;
    MatFn jacobian;     // rows dG_a/dq; finite differences when empty
    HessianFn hessians; // one n x n matrix per constraint; finite differences when empty

    Vec value(const Vec& q) const;
    Mat jac(const Vec& q) const;
    std::vector<Mat> hess(const Vec& q) const;
};

/// Structured tangent basis of the constraint surface at q.
///
/// Rows of g_lower have a unit entry in their own free column, zeros in the other
/// free columns and solved entries in the pivot columns. g_full stacks the
/// constraint Jacobian on top of g_lower.
struct TangentBasis {
    std::vector<int> pivot_columns;
    std::vector<int> free_columns;
    Mat jacobian;
    Mat g_lower;
    Mat g_full;
    Mat g_full_inv;
    double chart_condition = 1.0;  // condition number of the pivot minor
};

/// Pivot columns of a full-row-rank matrix by column-pivoted QR (largest pivot
/// first), returned in ascending order.
std::vector<int> select_pivots(const Mat& jac);

/// Largest singular value of the Jacobian over the smallest one of its pivot minor.
double minor_condition(const Mat& jac, const std::vector<int>& pivots);

/// Builds the structured basis at q. With empty pivots the chart is chosen at q;
/// otherwise the given chart is used. Throws ChartError when the pivot minor is singular.
TangentBasis fundamental_solutions(const ConstraintSpec& spec, const Vec& q,
                                   const std::vector<int>& pivots = {});

using BasisField = std::function<TangentBasis(const Vec&)>;

/// Basis field with the chart frozen.
BasisField frozen_basis(const ConstraintSpec& spec, std::vector<int> pivots);

/// c(A,B,D) = c_AB^D, antisymmetric in (A,B).
class StructureFunctions {
public:
    explicit StructureFunctions(int n = 0) : n_(n), data_(static_cast<std::size_t>(n) * n * n, 0.0) {}
    int n() const { return n_; }
    double& operator()(int a, int b, int d) { return data_[index(a, b, d)]; }
    double operator()(int a, int b, int d) const { return data_[index(a, b, d)]; }
    double max_abs() const;

private:
    std::size_t index(int a, int b, int d) const {
        return (static_cast<std::size_t>(a) * n_ + b) * n_ + d;
    }
    int n_;
    std::vector<double> data_;
};

/// Lie brackets of the rows of g_full with derivatives taken by central differences
/// of the basis field. Throws ChartError when the chart changes inside the stencil.
StructureFunctions structure_functions(const BasisField& basis_at, const Vec& q,
                                       const Tolerances& tol);

/// Derivatives d_E g_full(B, D) from the constraint Hessians (implicit differentiation
/// of the pivot entries). Entry E of the result is the matrix d_E g_full.
std::vector<Mat> basis_derivatives(const ConstraintSpec& spec, const TangentBasis& basis,
                                   const Vec& q);

/// Same brackets as structure_functions, from basis_derivatives.
StructureFunctions structure_functions_exact(const ConstraintSpec& spec, const TangentBasis& basis,
                                             const Vec& q);

/// Orthogonal Newton projection of q onto G = 0 (minimum-norm corrections).
Vec project_to_surface(const ConstraintSpec& spec, const Vec& q, const Tolerances& tol);

}  // namespace hamred
