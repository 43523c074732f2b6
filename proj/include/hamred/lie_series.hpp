#pragma once

#include <functional>
#include <vector>

#include "hamred/poisson.hpp"
#include "hamred/trajectory.hpp"

namespace hamred {

/// Truncated series z(t) = sum_n terms[n] t^n around an expansion point.
struct LieSeriesSolution {
    int order = 0;
    std::vector<Vec> terms;
    Vec expansion_point;
    /// max(|c_{N-1}| / |c_N|, (|c_{N-2}| / |c_N|)^(1/2)), infinite for a terminating series.
    double radius_estimate = 0.0;

    Vec evaluate(double t) const;
    Vec derivative(double t) const;
};

/// ((h.d)^n f)(z) / n! for n = 0..order by nested central differences along h, the
/// level-n step balancing truncation against round-off.
std::vector<double> lie_apply(const VectorField& field, const ScalarFn& f, const Vec& z, int order);

/// Series coefficients of the solution through z: the field's Taylor recurrence
/// when present, nested central differences otherwise.
LieSeriesSolution lie_coefficients(const VectorField& field, const Vec& z, int order);

/// Exact Lie coefficients of a polynomial f under a polynomial scalar field h
/// (coefficients in ascending powers).
std::vector<double> lie_apply_polynomial(const std::vector<double>& h, const std::vector<double>& f,
                                         double z, int order);

/// Taylor recurrence of the linear field z' = A z.
TaylorRecurrence linear_taylor(const Mat& a);

/// Truncated power series c_0 + c_1 t + ... in t. Operands of a binary operation are
/// truncated to the shorter length.
struct Jet {
    std::vector<double> c;

    int size() const { return static_cast<int>(c.size()); }
};

Jet operator+(const Jet& a, const Jet& b);
Jet operator-(const Jet& a, const Jet& b);
Jet operator-(const Jet& a);
Jet operator*(const Jet& a, const Jet& b);
Jet operator*(double s, const Jet& a);
Jet operator*(const Jet& a, double s);
/// Throws RadiusError when the constant term of b vanishes.
Jet operator/(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, double s);

using JetRates = std::function<std::vector<Jet>(const std::vector<Jet>& z)>;

/// Exact Taylor recurrence of z' = f(z) from f evaluated on truncated series:
/// c_{n+1} = [f(c_0 + ... + c_n t^n)]_n / (n + 1).
TaylorRecurrence jet_taylor(JetRates rates);

/// Piecewise series solution with re-expansion every step. Samples are taken on the
/// re-expansion grid, or every sample_dt from the local polynomials. The defect
/// diagnostic is |z'(t) - h(z(t))| of the local polynomial at each sample.
/// Throws RadiusError when the step exceeds half the radius estimate and
/// |c_N| step^N is above round-off.
Trajectory lie_solve(const VectorField& field, const Vec& z0, TimeSpan span, int order, double step,
                     double sample_dt = 0.0);

/// lie_solve of z -> omega(z) grad h(z); taylor, when given, supplies exact coefficients.
Trajectory lie_solve_hamiltonian(const PoissonStructure& ps, const ScalarFunction& h, const Vec& z0,
                                 TimeSpan span, int order, double step,
                                 const TaylorRecurrence& taylor = {}, double sample_dt = 0.0);

}  // namespace hamred
